'''
harness.py: synthetic problems, corruption, error metrics, and benchmarks

A synthetic instance is a low-TT-rank tensor X0, contracted from Gaussian TT
cores, plus a sparse tensor S0 whose support is a uniformly random subset of
the entries.  Benchmarks solve the same instances with each selected solver
and average the relative errors and solve times over repeated trials.

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

from   concurrent.futures import ThreadPoolExecutor
import csv
from   dataclasses import dataclass, replace
from   math import floor, prod
import numpy as np

from   fttrpca.decomp import TTFormat, tt_contract
from   fttrpca.exceptions import DimensionMismatch, InvalidArgument
from   fttrpca.log import log
from   fttrpca.solver import SOLVERS
from   fttrpca.tensor_core import frobenius, MIN_ORDER, MAX_ORDER


# Constants.
# .............................................................................

CSV_HEADER = ['solver', 'd', 'r', 'nr', 'q', 'rse_x', 'rse_s', 'iters', 'wall_time_s']

CORRUPTION_KINDS = ('sign', 'uniform')


# Class definitions.
# .............................................................................

@dataclass(frozen = True)
class SyntheticSpec():
    '''Parameters of a synthetic tensor robust PCA problem.

    'tt_rank' is [r_1, ..., r_{K-1}]; 'noise_ratio' is the fraction of
    corrupted entries; 'rank_scale' is the factor q of the Tucker rank given
    to the fast solver (see given_rank()).
    '''

    dims: tuple
    tt_rank: tuple
    noise_ratio: float
    rank_scale: float = 1.2
    seed: int = 0
    corruption: str = 'sign'

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        tt_rank = tuple(int(r) for r in self.tt_rank)
        if not MIN_ORDER <= len(dims) <= MAX_ORDER:
            raise DimensionMismatch(f'tensor order {len(dims)} is outside of the'
                                    f' supported range {MIN_ORDER}..{MAX_ORDER}')
        if any(d < 1 for d in dims):
            raise DimensionMismatch(f'tensor extents must be positive: {dims}')
        if len(tt_rank) != len(dims) - 1:
            raise DimensionMismatch(f'{len(dims)} extents need {len(dims) - 1}'
                                    f' TT ranks, got {len(tt_rank)}')
        if any(r < 1 for r in tt_rank):
            raise InvalidArgument(f'TT ranks must be positive: {tt_rank}')
        if not 0 <= self.noise_ratio < 1:
            raise InvalidArgument(f'noise ratio must be in [0, 1): {self.noise_ratio}')
        if not self.rank_scale > 0:
            raise InvalidArgument(f'rank scale must be positive: {self.rank_scale}')
        if self.corruption not in CORRUPTION_KINDS:
            raise InvalidArgument(f'unknown corruption kind: {self.corruption}')
        object.__setattr__(self, 'dims', dims)
        object.__setattr__(self, 'tt_rank', tt_rank)


@dataclass
class SyntheticInstance():
    Y: np.ndarray
    X0: np.ndarray
    S0: np.ndarray
    spec: SyntheticSpec = None


@dataclass
class TrialResult():
    '''Errors and timing of one solver on one instance, or an average of them.

    'failures' counts trials that raised an error; they are left out of the
    averages, and the message of the first one is kept in 'error'.
    '''

    solver: str
    dims: tuple
    tt_rank: tuple
    nr: float
    q: float
    rse_x: float = float('nan')
    rse_s: float = float('nan')
    iters: int = 0
    wall_time: float = 0.0
    converged: bool = False
    failures: int = 0
    error: str = None

    def csv_row(self):
        return [self.solver, _joined(self.dims), _joined(self.tt_rank),
                f'{self.nr:g}', f'{self.q:g}', f'{self.rse_x:.6e}',
                f'{self.rse_s:.6e}', self.iters, f'{self.wall_time:.4f}']


# Exported functions.
# .............................................................................

def gen_synthetic(spec):
    '''Generate Y = X0 + S0 as described by the SyntheticSpec 'spec'.'''
    rng = np.random.default_rng(spec.seed)
    X0 = tt_contract(TTFormat.random(spec.dims, spec.tt_rank, rng))
    Y, S0 = corrupt(X0, spec.noise_ratio, rng, kind = spec.corruption)
    log(f'generated instance {spec.dims} with TT rank {spec.tt_rank},'
        f' {np.count_nonzero(S0)} corrupted entries, seed {spec.seed}')
    return SyntheticInstance(Y, X0, S0, spec)


def corrupt(x, noise_ratio, rng, kind = 'sign', value_range = (0, 255)):
    '''Corrupt a random fraction 'noise_ratio' of the entries of 'x'.

    The support has round(noise_ratio * size) entries, drawn uniformly
    without replacement.  With kind 'sign', +1 or -1 (with equal probability)
    is added to each entry on the support.  With kind 'uniform', each entry
    on the support is replaced by a value drawn uniformly from 'value_range'.
    Returns the corrupted tensor and the sparse difference from 'x'.
    '''
    if not 0 <= noise_ratio < 1:
        raise InvalidArgument(f'noise ratio must be in [0, 1): {noise_ratio}')
    if kind not in CORRUPTION_KINDS:
        raise InvalidArgument(f'unknown corruption kind: {kind}')
    x = np.asarray(x, dtype = np.float64)
    count = _round_half_up(noise_ratio * x.size)
    support = rng.choice(x.size, size = count, replace = False)
    corrupted = x.copy().reshape(-1)
    if kind == 'sign':
        corrupted[support] += rng.choice([-1.0, 1.0], size = count)
    else:
        low, high = value_range
        if not low < high:
            raise InvalidArgument(f'invalid value range: {value_range}')
        corrupted[support] = rng.uniform(low, high, size = count)
    corrupted = corrupted.reshape(x.shape)
    return corrupted, corrupted - x


def rse(estimate, truth):
    '''Relative error ||estimate - truth||_F / ||truth||_F.'''
    if np.shape(estimate) != np.shape(truth):
        raise DimensionMismatch(f'shapes differ: {np.shape(estimate)} vs'
                                f' {np.shape(truth)}')
    base = frobenius(truth)
    if base == 0:
        raise InvalidArgument('relative error is undefined for a zero tensor')
    return frobenius(np.subtract(estimate, truth)) / base


def given_rank(tt_rank, q, dims):
    '''Tucker rank R_k = round(q r_{k-1} r_k), with r_0 = r_K = 1.

    Values are rounded half away from zero and clamped to [1, d_k].
    '''
    if len(tt_rank) != len(dims) - 1:
        raise DimensionMismatch(f'{len(dims)} extents need {len(dims) - 1}'
                                f' TT ranks, got {len(tt_rank)}')
    chain = (1,) + tuple(tt_rank) + (1,)
    return [min(max(_round_half_up(q * chain[k] * chain[k + 1]), 1), d)
            for k, d in enumerate(dims)]


def trial_seeds(seed, repeats):
    '''Independent per-trial seeds derived from 'seed'.'''
    children = np.random.SeedSequence(seed).spawn(repeats)
    return [int(child.generate_state(1)[0]) for child in children]


def run_trial(instance, solver, cfg):
    '''Solve 'instance' with the named solver; returns a TrialResult.

    Errors raised by the solver are recorded in the result.
    '''
    spec = instance.spec
    result = TrialResult(solver, spec.dims, spec.tt_rank, spec.noise_ratio,
                         spec.rank_scale)
    try:
        outcome = SOLVERS[solver](instance.Y, cfg)
    except Exception as ex:
        log(f'{solver} failed on seed {spec.seed}: {ex}')
        result.failures = 1
        result.error = str(ex)
        return result
    result.rse_x = rse(outcome.X, instance.X0)
    if frobenius(instance.S0) > 0:
        result.rse_s = rse(outcome.S, instance.S0)
    result.iters = outcome.report.iters
    result.wall_time = outcome.report.wall_time
    result.converged = outcome.report.converged
    log(f'{solver} on seed {spec.seed}: RSE-X {result.rse_x:.3e}, RSE-S'
        f' {result.rse_s:.3e}, {result.iters} iterations, {result.wall_time:.3f} s')
    return result


def run_benchmark(spec, cfg, solvers = ('fttnn', 'ttnn'), repeats = 1, parallel = 1):
    '''Run each solver on 'repeats' instances; return one average per solver.

    Every solver sees the same instances.  If cfg.rank is not set, the fast
    solver gets the rank given by given_rank() with q = spec.rank_scale.
    Trials run in a pool of 'parallel' threads; the results do not depend on
    the pool size.
    '''
    unknown = [name for name in solvers if name not in SOLVERS]
    if unknown:
        raise InvalidArgument(f'unknown solver(s): {", ".join(unknown)}')
    if repeats < 1:
        raise InvalidArgument(f'repeats must be positive: {repeats}')
    if cfg.rank is None:
        cfg = replace(cfg, rank = tuple(given_rank(spec.tt_rank, spec.rank_scale,
                                                   spec.dims)))
    log(f'benchmark: {spec}, rank {cfg.rank}, {repeats} repeats,'
        f' {parallel} threads')

    def trial(seed):
        instance = gen_synthetic(replace(spec, seed = seed))
        return [run_trial(instance, name, cfg) for name in solvers]

    seeds = trial_seeds(spec.seed, repeats)
    if parallel > 1:
        with ThreadPoolExecutor(max_workers = parallel) as executor:
            per_seed = list(executor.map(trial, seeds))
    else:
        per_seed = [trial(seed) for seed in seeds]
    return [_average([results[i] for results in per_seed])
            for i in range(len(solvers))]


def rank_sweep(spec, qs, cfg, solvers = ('fttnn', 'ttnn'), repeats = 1, parallel = 1):
    '''Run benchmarks for each rank scale in 'qs'; rows are grouped by q.'''
    if not qs:
        raise InvalidArgument('the rank sweep needs at least one value of q')
    rows = []
    for q in qs:
        rows += run_benchmark(replace(spec, rank_scale = q), replace(cfg, rank = None),
                              solvers, repeats, parallel)
    return rows


def write_csv(results, stream):
    '''Write the header and one row per TrialResult to the text 'stream'.'''
    writer = csv.writer(stream, lineterminator = '\n')
    writer.writerow(CSV_HEADER)
    for result in results:
        writer.writerow(result.csv_row())


# Miscellaneous utilities local to this module.
# .............................................................................

def _round_half_up(value):
    return int(floor(value + 0.5))


def _joined(values):
    values = tuple(values)
    if all(v == values[0] for v in values):
        return str(values[0])
    return 'x'.join(str(v) for v in values)


def _average(trials):
    first = trials[0]
    done = [t for t in trials if t.error is None]
    failed = [t for t in trials if t.error is not None]
    result = TrialResult(first.solver, first.dims, first.tt_rank, first.nr,
                         first.q, failures = len(failed),
                         error = failed[0].error if failed else None)
    if done:
        result.rse_x = float(np.mean([t.rse_x for t in done]))
        result.rse_s = float(np.mean([t.rse_s for t in done]))
        result.iters = int(round(np.mean([t.iters for t in done])))
        result.wall_time = float(np.mean([t.wall_time for t in done]))
        result.converged = all(t.converged for t in done)
    return result
