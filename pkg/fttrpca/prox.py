'''
prox.py: proximal and projection operators used by the ADMM solvers

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

import numpy as np

from   fttrpca.exceptions import DimensionMismatch, InvalidArgument
from   fttrpca.tensor_core import thin_svd


def svt(m, lam):
    '''Singular value thresholding of matrix 'm' at level 'lam'.

    Returns A max(Sigma - lam I, 0) B^T for the thin SVD m = A Sigma B^T,
    which is the minimizer of lam ||Z||_* + 1/2 ||Z - m||_F^2.
    '''
    if lam < 0:
        raise InvalidArgument(f'threshold must be nonnegative: {lam}')
    m = np.asarray(m, dtype = np.float64)
    if lam == 0:
        return m.copy()
    left, sigma, right_t = thin_svd(m)
    sigma = sigma - lam
    # Singular values are sorted, so the kept ones form a prefix.
    keep = int(np.count_nonzero(sigma > 0))
    return (left[:, :keep] * sigma[:keep]) @ right_t[:keep]


def soft_threshold(t, tau):
    '''Elementwise soft shrinkage sign(x) max(|x| - tau, 0).'''
    if tau < 0:
        raise InvalidArgument(f'threshold must be nonnegative: {tau}')
    t = np.asarray(t, dtype = np.float64)
    return np.sign(t) * np.maximum(np.abs(t) - tau, 0.0)


def procrustes(m):
    '''Return the matrix with orthonormal columns that maximizes <U, m>.

    For the thin SVD m = A Sigma B^T, this is A B^T.  If m is rank deficient,
    the result is one of the maximizers.
    '''
    m = np.asarray(m, dtype = np.float64)
    if m.ndim != 2 or m.shape[0] < m.shape[1]:
        raise DimensionMismatch(f'expected a tall or square matrix, got {m.shape}')
    left, _, right_t = thin_svd(m)
    return left @ right_t
