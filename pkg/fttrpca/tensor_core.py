'''
tensor_core.py: dense tensors, unfoldings, folds, and mode products

Dense tensors are float64 numpy arrays.  Every reshape in this module uses
column-major order (first index varies fastest), so that the two unfoldings
below share a single linearization of the tensor entries:

  mode_unfold(t, mode)   d_mode x (product of the other extents); the column
                         index runs over the remaining indices with the
                         lowest-numbered one varying fastest.

  tt_unfold(t, k)        (d_1 ... d_k) x (d_{k+1} ... d_K); this is a plain
                         column-major reshape.

Mode numbers are numpy axes and start at 0.  The split number k of the
tensor-train unfolding is the count of leading modes that go into the rows,
so it runs from 1 to K-1.

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

from   functools import reduce
from   math import prod
import numpy as np
import scipy.linalg

from   fttrpca.exceptions import DimensionMismatch, NumericalError
from   fttrpca.log import log


# Constants.
# .............................................................................

MIN_ORDER = 2
MAX_ORDER = 8


# Construction and validation.
# .............................................................................

def as_tensor(data, min_order = MIN_ORDER, max_order = MAX_ORDER):
    '''Return 'data' as a float64 ndarray after checking its order and shape.'''
    t = np.asarray(data, dtype = np.float64)
    if not min_order <= t.ndim <= max_order:
        raise DimensionMismatch(f'tensor order {t.ndim} is outside of the'
                                f' supported range {min_order}..{max_order}')
    if any(d < 1 for d in t.shape):
        raise DimensionMismatch(f'tensor extents must be positive: {t.shape}')
    return t


def _check_mode(mode, order):
    if not 0 <= mode < order:
        raise DimensionMismatch(f'mode {mode} is invalid for an order-{order} tensor')


def _check_split(k, order):
    if not 1 <= k <= order - 1:
        raise DimensionMismatch(f'split {k} is invalid for an order-{order} tensor')


# Unfoldings and folds.
# .............................................................................

def mode_unfold(t, mode):
    '''Standard mode unfolding of tensor 't' along axis 'mode'.'''
    t = np.asarray(t)
    _check_mode(mode, t.ndim)
    return np.reshape(np.moveaxis(t, mode, 0), (t.shape[mode], -1), order = 'F')


def mode_fold(m, mode, dims):
    '''Inverse of mode_unfold(): fold matrix 'm' into a tensor of shape 'dims'.'''
    dims = tuple(dims)
    _check_mode(mode, len(dims))
    expected = (dims[mode], prod(dims) // dims[mode])
    if np.shape(m) != expected:
        raise DimensionMismatch(f'cannot fold a {np.shape(m)} matrix along mode'
                                f' {mode} into {dims}; expected {expected}')
    moved = (dims[mode],) + dims[:mode] + dims[mode + 1:]
    return np.moveaxis(np.reshape(m, moved, order = 'F'), 0, mode)


def tt_unfold(t, k):
    '''Tensor-train unfolding: the first k modes index rows, the rest columns.'''
    t = np.asarray(t)
    _check_split(k, t.ndim)
    return np.reshape(t, (prod(t.shape[:k]), -1), order = 'F')


def tt_fold(m, k, dims):
    '''Inverse of tt_unfold().'''
    dims = tuple(dims)
    _check_split(k, len(dims))
    expected = (prod(dims[:k]), prod(dims[k:]))
    if np.shape(m) != expected:
        raise DimensionMismatch(f'cannot fold a {np.shape(m)} matrix at split'
                                f' {k} into {dims}; expected {expected}')
    return np.reshape(m, dims, order = 'F')


# Products.
# .............................................................................

def mode_product(t, m, mode):
    '''Mode product t x_mode m, replacing extent d_mode by the rows of m.'''
    t = np.asarray(t)
    m = np.asarray(m)
    _check_mode(mode, t.ndim)
    if m.ndim != 2 or m.shape[1] != t.shape[mode]:
        raise DimensionMismatch(f'cannot multiply mode {mode} of a {t.shape}'
                                f' tensor by a {m.shape} matrix')
    return np.moveaxis(np.tensordot(m, t, axes = (1, mode)), 0, mode)


def tucker_product(core, factors, transpose = False, skip = None):
    '''Multiply 'core' along every mode by the matching matrix in 'factors'.

    With transpose = True, the transposes of the factors are used, which maps
    a full-size tensor to core size when the factors have orthonormal
    columns.  If 'skip' is a mode number, that mode is left alone.
    '''
    if len(factors) != np.ndim(core):
        raise DimensionMismatch(f'{len(factors)} factors given for an order-'
                                f'{np.ndim(core)} tensor')
    result = core
    for mode, factor in enumerate(factors):
        if mode == skip:
            continue
        result = mode_product(result, factor.T if transpose else factor, mode)
    return result


def kron(a, b):
    '''Kronecker product of two matrices.'''
    return np.kron(np.asarray(a, dtype = np.float64), np.asarray(b, dtype = np.float64))


def kron_chain(matrices):
    '''Return U_k ⊗ ... ⊗ U_1 for matrices = [U_1, ..., U_k].

    This ordering matches the column-major linearization: the row index of
    the result has the index of U_1 varying fastest.
    '''
    if not matrices:
        raise DimensionMismatch('kron_chain needs at least one matrix')
    return reduce(kron, reversed(matrices))


# Linear algebra helpers.
# .............................................................................

def thin_svd(m):
    '''Return (A, s, Bt) with m = A @ diag(s) @ Bt and s in descending order.

    The divide-and-conquer LAPACK driver is tried first; if it fails to
    converge, the slower QR-iteration driver is used.
    '''
    try:
        return scipy.linalg.svd(m, full_matrices = False, check_finite = False,
                                lapack_driver = 'gesdd')
    except np.linalg.LinAlgError:
        log(f'gesdd failed on a {np.shape(m)} matrix; retrying with gesvd')
    try:
        return scipy.linalg.svd(m, full_matrices = False, check_finite = False,
                                lapack_driver = 'gesvd')
    except np.linalg.LinAlgError as ex:
        raise NumericalError(f'SVD did not converge: {ex}')


def singular_values(m):
    try:
        return scipy.linalg.svdvals(m, check_finite = False)
    except np.linalg.LinAlgError:
        return thin_svd(m)[1]


def frobenius(t):
    return float(np.linalg.norm(np.ravel(t)))
