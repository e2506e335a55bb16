'''
decomp.py: tensor-train cores, their Tucker compression, and the TT nuclear norm

A tensor in TT format is a chain of third-order cores G_k of shape
(r_{k-1}, d_k, r_k) with r_0 = r_K = 1.  Any such tensor can be rewritten as a
small core tensor multiplied along each mode by a matrix with orthonormal
columns, and the TT nuclear norm of the full tensor equals that of the small
core.  This is what lets the fast solver work at core size.

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

from   dataclasses import dataclass
from   math import prod
import numpy as np

from   fttrpca.exceptions import DimensionMismatch, InvalidArgument
from   fttrpca.log import log
from   fttrpca.tensor_core import as_tensor, mode_unfold, mode_fold, tt_unfold
from   fttrpca.tensor_core import tucker_product, thin_svd, singular_values


# Constants.
# .............................................................................

# Singular values below this fraction of the largest one are treated as zero
# when compressing a core.
RANK_TOLERANCE = 1e-12


# Class definitions.
# .............................................................................

@dataclass(frozen = True)
class TTFormat():
    '''A tensor in tensor-train format, given by its list of cores.'''

    cores: tuple

    def __post_init__(self):
        cores = tuple(np.asarray(core, dtype = np.float64) for core in self.cores)
        if len(cores) < 2:
            raise DimensionMismatch('a tensor train needs at least 2 cores')
        for k, core in enumerate(cores):
            if core.ndim != 3:
                raise DimensionMismatch(f'core {k} has order {core.ndim}, not 3')
        if cores[0].shape[0] != 1 or cores[-1].shape[2] != 1:
            raise DimensionMismatch('boundary TT ranks must be 1; got'
                                    f' {cores[0].shape[0]} and {cores[-1].shape[2]}')
        for k in range(len(cores) - 1):
            if cores[k].shape[2] != cores[k + 1].shape[0]:
                raise DimensionMismatch(f'rank mismatch between cores {k} and'
                                        f' {k + 1}: {cores[k].shape} vs'
                                        f' {cores[k + 1].shape}')
        object.__setattr__(self, 'cores', cores)


    @property
    def order(self):
        return len(self.cores)


    @property
    def dims(self):
        return tuple(core.shape[1] for core in self.cores)


    @property
    def ranks(self):
        '''The TT rank [r_1, ..., r_{K-1}].'''
        return tuple(core.shape[2] for core in self.cores[:-1])


    @classmethod
    def random(cls, dims, ranks, rng):
        '''Cores with i.i.d. standard Gaussian entries.

        'ranks' is the TT rank [r_1, ..., r_{K-1}]; 'rng' is a numpy Generator.
        '''
        if len(ranks) != len(dims) - 1:
            raise DimensionMismatch(f'{len(dims)} extents need {len(dims) - 1}'
                                    f' TT ranks, got {len(ranks)}')
        if any(r < 1 for r in ranks):
            raise InvalidArgument(f'TT ranks must be positive: {ranks}')
        chain = (1,) + tuple(ranks) + (1,)
        return cls(tuple(rng.standard_normal((chain[k], d, chain[k + 1]))
                         for k, d in enumerate(dims)))


@dataclass(frozen = True)
class TuckerCompressed():
    '''A core tensor and factors U_k with orthonormal columns.'''

    core: np.ndarray
    factors: tuple

    @property
    def rank(self):
        return tuple(u.shape[1] for u in self.factors)


    def full(self):
        '''Return core x_1 U_1 x_2 ... x_K U_K.'''
        return tucker_product(self.core, self.factors)


# Exported functions.
# .............................................................................

def tt_contract(tt):
    '''Contract the cores of 'tt' into the dense tensor they represent.'''
    # The running product is a (d_1 ... d_k) x r_k matrix whose rows follow
    # the column-major order of the leading indices.
    result = np.reshape(tt.cores[0], (tt.dims[0], -1))
    for core in tt.cores[1:]:
        r_in, d, r_out = core.shape
        result = result @ np.reshape(core, (r_in, d * r_out), order = 'F')
        result = np.reshape(result, (-1, r_out), order = 'F')
    return np.reshape(result, tt.dims, order = 'F')


def tucker_compress(tt, tolerance = RANK_TOLERANCE):
    '''Rewrite 'tt' as a small core tensor with orthonormal factors.

    For each core G_k with d_k > r_{k-1} r_k, U_k is the left singular matrix
    of the mode-2 unfolding of G_k and the core becomes sigma_k V_k^T folded
    back; otherwise U_k is the identity and the core is kept.  The returned
    core tensor is the contraction of the new cores, so that its extents are
    R_k = rank of the mode-2 unfolding (at most min(d_k, r_{k-1} r_k)).
    '''
    new_cores = []
    factors = []
    for k, core in enumerate(tt.cores):
        r_in, d, r_out = core.shape
        if d > r_in * r_out:
            left, sigma, right_t = thin_svd(mode_unfold(core, 1))
            keep = max(1, int(np.count_nonzero(sigma > tolerance * sigma[0])))
            factors.append(left[:, :keep])
            new_cores.append(mode_fold(sigma[:keep, None] * right_t[:keep],
                                       1, (r_in, keep, r_out)))
            log(f'core {k}: compressed mode of size {d} to {keep}')
        else:
            factors.append(np.eye(d))
            new_cores.append(core)
    return TuckerCompressed(tt_contract(TTFormat(tuple(new_cores))), tuple(factors))


def ttnn(t, alpha):
    '''TT nuclear norm: sum over k of alpha_k times ||tt_unfold(t, k)||_*.'''
    t = as_tensor(t)
    alpha = checked_alpha(alpha, t.ndim)
    return float(sum(a * singular_values(tt_unfold(t, k)).sum()
                     for k, a in enumerate(alpha, start = 1) if a != 0))


def split_sizes(dims):
    '''Return min(d_1...d_k, d_{k+1}...d_K) for k = 1..K-1.'''
    return [min(prod(dims[:k]), prod(dims[k:])) for k in range(1, len(dims))]


def default_alpha(dims):
    '''Weights proportional to the smaller side of each TT unfolding.'''
    if len(dims) < 2:
        raise DimensionMismatch('default weights need at least 2 extents')
    delta = np.array(split_sizes(dims), dtype = np.float64)
    return delta / delta.sum()


# Validation helpers.
# .............................................................................

def checked_alpha(alpha, order):
    alpha = np.asarray(alpha, dtype = np.float64).ravel()
    if alpha.size != order - 1:
        raise DimensionMismatch(f'an order-{order} tensor needs {order - 1}'
                                f' weights, got {alpha.size}')
    if np.any(alpha < 0) or not np.all(np.isfinite(alpha)):
        raise InvalidArgument(f'weights must be finite and nonnegative: {alpha}')
    return alpha
