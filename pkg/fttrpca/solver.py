'''
solver.py: ADMM solvers for tensor robust PCA with the TT nuclear norm

Both solvers split an observed tensor Y into a low-rank part X and a sparse
part S by minimizing ||X||_ttnn + tau ||S||_1 subject to Y = X + S.

  fttnn_solve   writes X = Xt x_1 U_1 ... x_K U_K with a small core Xt and
                factors U_k with orthonormal columns, and applies singular
                value thresholding to unfoldings of Xt only.

  ttnn_solve    the baseline: thresholds unfoldings of the full-size X.

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

from   dataclasses import dataclass, field, replace
from   math import prod, sqrt
import numpy as np
import scipy.linalg
from   time import perf_counter

from   fttrpca.decomp import TuckerCompressed, default_alpha, checked_alpha
from   fttrpca.exceptions import DimensionMismatch, InvalidArgument, NumericalError
from   fttrpca.log import log
from   fttrpca.prox import svt, soft_threshold, procrustes
from   fttrpca.tensor_core import as_tensor, tt_unfold, tt_fold, mode_unfold
from   fttrpca.tensor_core import tucker_product, thin_svd, frobenius


# Constants.
# .............................................................................

# Iterations between progress messages in the debug log.
_LOG_INTERVAL = 10


# Class definitions.
# .............................................................................

@dataclass(frozen = True)
class SolverConfig():
    '''Parameters of the ADMM solvers.

    'tau' and 'alpha' may be None, in which case they take the values of
    default_tau() and default_alpha() for the dimensions of the input.  The
    default tau is multiplied by 'tau_scale'; an explicit tau is used as is.
    'rank' is the Tucker rank [R_1, ..., R_K] of the core used by the fast
    solver; the baseline solver ignores it.  'seed' only matters when a mode
    unfolding of the input has fewer columns than the requested rank.
    '''

    tau: float       = None
    alpha: tuple     = None
    mu0: float       = 1e-2
    mu_max: float    = 1e10
    rho: float       = 1.1
    tol: float       = 1e-8
    max_iters: int   = 500
    rank: tuple      = None
    seed: int        = 0
    tau_scale: float = 1.0

    def resolved(self, dims, need_rank = False):
        '''Return a copy with defaults filled in, after validating values.'''
        K = len(dims)
        if not (np.isfinite(self.tau_scale) and self.tau_scale > 0):
            raise InvalidArgument(f'tau_scale must be positive and finite: {self.tau_scale}')
        if self.tau is None:
            tau = self.tau_scale * default_tau(dims)
        else:
            tau = float(self.tau)
        alpha = default_alpha(dims) if self.alpha is None else self.alpha
        alpha = tuple(float(a) for a in checked_alpha(alpha, K))
        for name in ['mu0', 'mu_max', 'rho', 'tol']:
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidArgument(f'{name} must be positive and finite: {value}')
        if not (np.isfinite(tau) and tau > 0):
            raise InvalidArgument(f'tau must be positive and finite: {tau}')
        if self.mu0 > self.mu_max:
            raise InvalidArgument(f'mu0 ({self.mu0}) exceeds mu_max ({self.mu_max})')
        if self.max_iters < 1:
            raise InvalidArgument(f'max_iters must be positive: {self.max_iters}')
        rank = self.rank
        if need_rank:
            if rank is None:
                raise InvalidArgument('the fast solver needs a Tucker rank')
            rank = tuple(int(r) for r in rank)
            if len(rank) != K:
                raise DimensionMismatch(f'an order-{K} tensor needs {K} rank'
                                        f' values, got {len(rank)}')
            if any(not 1 <= r <= d for r, d in zip(rank, dims)):
                raise InvalidArgument(f'rank {rank} must satisfy 1 <= R_k <= d_k'
                                      f' for dims {tuple(dims)}')
        return replace(self, tau = tau, alpha = alpha, rank = rank)


@dataclass
class SolverState():
    '''Iterates of the fast solver.'''

    X: np.ndarray
    S: np.ndarray
    Xtilde: np.ndarray
    U: list
    M: list
    Q: list
    E: np.ndarray
    P: np.ndarray
    mu: float
    iter: int = 0
    full: np.ndarray = None             # Tucker product of Xtilde and U


@dataclass
class SolveReport():
    '''Convergence record of one solve.

    'residual' holds, per iteration, the largest feasibility residual
    relative to ||Y||: ||Y - X - S|| for both solvers and, for the fast
    solver, also ||X - Xt x U||.
    '''

    solver: str
    iters: int = 0
    converged: bool = False
    rel_change_x: list = field(default_factory = list)
    rel_change_s: list = field(default_factory = list)
    residual: list = field(default_factory = list)
    wall_time: float = 0.0
    tau: float = None
    alpha: tuple = None
    rank: tuple = None

    def to_dict(self):
        '''Summary suitable for a one-line JSON report.'''
        return {'solver'      : self.solver,
                'iters'       : self.iters,
                'converged'   : self.converged,
                'wall_time_s' : self.wall_time,
                'tau'         : self.tau,
                'alpha'       : list(self.alpha) if self.alpha else None,
                'rank'        : list(self.rank) if self.rank else None}


@dataclass
class DecomposeResult():
    '''Low-rank estimate X, sparse estimate S, and the solve report.

    The fast solver also returns its final core and factors in 'tucker'.
    '''

    X: np.ndarray
    S: np.ndarray
    report: SolveReport
    tucker: TuckerCompressed = None


class _ADMMSolver():
    '''Iteration framework shared by both solvers.

    Subclasses implement _initialize() and _step(), and may extend
    _infeasibility().  The penalty mu grows by the factor rho after every
    iteration, up to mu_max.  Iterations stop when the relative changes of
    both X and S and the feasibility residuals are all at most tol.
    '''

    name = ''
    needs_rank = False

    def __init__(self, Y, cfg):
        self.Y = as_tensor(Y)
        if not np.all(np.isfinite(self.Y)):
            raise InvalidArgument('the input tensor contains non-finite values')
        self.cfg = cfg.resolved(self.Y.shape, need_rank = self.needs_rank)
        self.dims = self.Y.shape
        self.K = self.Y.ndim
        self.report = SolveReport(self.name, tau = self.cfg.tau,
                                  alpha = self.cfg.alpha,
                                  rank = self.cfg.rank if self.needs_rank else None)


    def solve(self):
        cfg = self.cfg
        norm_y = frobenius(self.Y)
        log(f'{self.name}: dims {self.dims}, tau {cfg.tau:.6g}, alpha'
            f' {cfg.alpha}, rank {self.report.rank}')
        start = perf_counter()
        if norm_y == 0:
            log(f'{self.name}: input is zero; returning zero components')
            return self._zero_result(start)

        rng = np.random.default_rng(cfg.seed)
        self._initialize(rng)
        report = self.report
        for t in range(1, cfg.max_iters + 1):
            x_prev, s_prev = self.X, self.S
            self._step()
            dx = _relative_change(self.X, x_prev)
            ds = _relative_change(self.S, s_prev)
            res = self._infeasibility() / norm_y
            if not (np.isfinite(dx) and np.isfinite(ds) and np.isfinite(res)):
                raise NumericalError(f'{self.name}: iterates became non-finite'
                                     f' at iteration {t}')
            report.rel_change_x.append(dx)
            report.rel_change_s.append(ds)
            report.residual.append(res)
            report.iters = t
            self.mu = min(cfg.rho * self.mu, cfg.mu_max)
            if t % _LOG_INTERVAL == 0:
                log(f'{self.name} iter {t}: mu {self.mu:.3g}, dX {dx:.3e},'
                    f' dS {ds:.3e}, residual {res:.3e}')
            if max(dx, ds, res) <= cfg.tol:
                report.converged = True
                break

        report.wall_time = perf_counter() - start
        log(f'{self.name}: {"converged" if report.converged else "stopped"}'
            f' after {report.iters} iterations in {report.wall_time:.3f} s')
        return self._result()


    def _infeasibility(self):
        return frobenius(self.Y - self.X - self.S)


    def _zero_result(self, start):
        self.report.iters = 1
        self.report.converged = True
        self.report.rel_change_x.append(0.0)
        self.report.rel_change_s.append(0.0)
        self.report.residual.append(0.0)
        self.report.wall_time = perf_counter() - start
        zeros = np.zeros(self.dims)
        return DecomposeResult(zeros, zeros.copy(), self.report)


    def _result(self):
        return DecomposeResult(self.X, self.S, self.report)


class FTTNNSolver(_ADMMSolver):
    '''ADMM for the TT nuclear norm of a Tucker-compressed core.

    One iteration updates, in order: the auxiliary tensors M^k by singular
    value thresholding of the core unfoldings; X as the average of its two
    estimates (from Y - S and from the Tucker product); S by soft shrinkage;
    the core Xt; each factor U_k by an orthogonal Procrustes step using the
    factors already updated in this iteration; and finally the multipliers
    Q^k, P and E.  The factors start from a truncated HOSVD of Y.
    '''

    name = 'fttnn'
    needs_rank = True

    def _initialize(self, rng):
        Y, rank = self.Y, self.cfg.rank
        # Truncated HOSVD of Y: leading mode subspaces, and the core is the
        # projection of Y onto them.
        factors = [_leading_subspace(Y, k, r, rng) for k, r in enumerate(rank)]
        core = tucker_product(Y, factors, transpose = True)
        self.state = SolverState(X = Y.copy(), S = np.zeros(self.dims),
                                 Xtilde = core, U = factors,
                                 M = [core.copy() for _ in range(self.K - 1)],
                                 Q = [np.zeros(rank) for _ in range(self.K - 1)],
                                 E = np.zeros(self.dims), P = np.zeros(self.dims),
                                 mu = self.cfg.mu0,
                                 full = tucker_product(core, factors))


    @property
    def X(self):
        return self.state.X


    @property
    def S(self):
        return self.state.S


    @property
    def mu(self):
        return self.state.mu


    @mu.setter
    def mu(self, value):
        self.state.mu = value


    def _step(self):
        st, Y, K = self.state, self.Y, self.K
        mu, rank = st.mu, self.cfg.rank

        for k in range(1, K):
            target = tt_unfold(st.Xtilde - st.Q[k - 1] / mu, k)
            st.M[k - 1] = tt_fold(svt(target, self.cfg.alpha[k - 1] / mu), k, rank)

        st.X = 0.5 * ((Y - st.S + st.E / mu) + (st.full - st.P / mu))
        st.S = soft_threshold(Y - st.X + st.E / mu, self.cfg.tau / mu)

        projected = tucker_product(mu * st.X + st.P, st.U, transpose = True)
        st.Xtilde = (projected + sum(mu * m + q for m, q in zip(st.M, st.Q))) / (K * mu)

        target = st.X + st.P / mu
        for k in range(K):
            partial = tucker_product(target, st.U, transpose = True, skip = k)
            st.U[k] = procrustes(mode_unfold(partial, k) @ mode_unfold(st.Xtilde, k).T)

        st.full = tucker_product(st.Xtilde, st.U)
        for k in range(K - 1):
            st.Q[k] = st.Q[k] + mu * (st.M[k] - st.Xtilde)
        st.P = st.P + mu * (st.X - st.full)
        st.E = st.E + mu * (Y - st.X - st.S)
        st.iter += 1


    def _infeasibility(self):
        st = self.state
        return max(super()._infeasibility(), frobenius(st.X - st.full))


    def _result(self):
        st = self.state
        return DecomposeResult(st.X, st.S, self.report,
                               TuckerCompressed(st.Xtilde, tuple(st.U)))


class TTNNSolver(_ADMMSolver):
    '''ADMM for the TT nuclear norm of the full-size tensor.

    Each of the K-1 auxiliary tensors M^k is a thresholded copy of X; X is
    the average of the K estimates given by Y - S and the M^k.
    '''

    name = 'ttnn'

    def _initialize(self, rng):
        self.X = self.Y.copy()
        self.S = np.zeros(self.dims)
        self.M = [self.X.copy() for _ in range(self.K - 1)]
        self.Q = [np.zeros(self.dims) for _ in range(self.K - 1)]
        self.E = np.zeros(self.dims)
        self.mu = self.cfg.mu0


    def _step(self):
        Y, K, mu = self.Y, self.K, self.mu
        for k in range(1, K):
            target = tt_unfold(self.X - self.Q[k - 1] / mu, k)
            self.M[k - 1] = tt_fold(svt(target, self.cfg.alpha[k - 1] / mu), k, self.dims)

        estimates = sum(m + q / mu for m, q in zip(self.M, self.Q))
        self.X = (estimates + (Y - self.S + self.E / mu)) / K
        self.S = soft_threshold(Y - self.X + self.E / mu, self.cfg.tau / mu)

        for k in range(K - 1):
            self.Q[k] = self.Q[k] + mu * (self.M[k] - self.X)
        self.E = self.E + mu * (Y - self.X - self.S)


# Exported functions.
# .............................................................................

def fttnn_solve(Y, cfg):
    '''Decompose Y with the fast solver; returns a DecomposeResult.'''
    return FTTNNSolver(Y, cfg).solve()


def ttnn_solve(Y, cfg):
    '''Decompose Y with the baseline solver; returns a DecomposeResult.'''
    return TTNNSolver(Y, cfg).solve()


SOLVERS = {
    'fttnn' : fttnn_solve,
    'ttnn'  : ttnn_solve,
}


def default_tau(dims):
    '''Mean over the TT unfoldings of 1/sqrt(larger side of the unfolding).'''
    K = len(dims)
    if K < 2:
        raise DimensionMismatch('default tau needs at least 2 extents')
    return sum(1 / sqrt(max(prod(dims[:k]), prod(dims[k:])))
               for k in range(1, K)) / (K - 1)


# Miscellaneous utilities local to this module.
# .............................................................................

def _leading_subspace(Y, k, r, rng):
    '''Orthonormal basis of the r leading left singular vectors of mode k.

    When the mode-k unfolding has fewer than r columns, the basis is
    completed with random directions.
    '''
    left = thin_svd(mode_unfold(Y, k))[0][:, :r]
    if left.shape[1] < r:
        fill = rng.standard_normal((Y.shape[k], r - left.shape[1]))
        left = scipy.linalg.qr(np.hstack([left, fill]), mode = 'economic')[0]
    return left


def _relative_change(new, old):
    change = frobenius(new - old)
    base = frobenius(old)
    return change / base if base > 0 else change
