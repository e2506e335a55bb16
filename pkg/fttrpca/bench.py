'''
bench.py: the "bench" command, which compares the solvers on synthetic data

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

from   commonpy.data_utils import pluralized
from   dataclasses import replace
import sys

from   fttrpca import _SOLVERS
from   fttrpca.command import Command, command_parser, add_solver_options
from   fttrpca.command import solver_overrides, int_list, ratio_list, solver_list
from   fttrpca.command import positive_float, positive_int, float_range
from   fttrpca.config import Config
from   fttrpca.exceptions import FileError
from   fttrpca.harness import SyntheticSpec, CORRUPTION_KINDS
from   fttrpca.harness import run_benchmark, rank_sweep, write_csv
from   fttrpca.log import log
from   fttrpca.ui import inform, warn


class BenchCommand(Command):
    '''Compare the solvers on synthetic problems and write a CSV table.

    For each noise ratio given with --nr, --repeats instances are generated
    (as by the "synth" command) and solved by every solver named in
    --solvers.  Each row of the output holds the averages for one solver:

      solver,d,r,nr,q,rse_x,rse_s,iters,wall_time_s

    where rse_x and rse_s are the relative errors of the low-rank and sparse
    estimates and wall_time_s is the time spent in the solver.  Columns d and
    r hold a single value when all extents (or TT ranks) are equal, and the
    values joined by "x" otherwise.  With --sweep-q START:STEP:STOP, the
    benchmark is repeated for every rank scale q in the range, giving one
    row per q and solver.  Trials that fail are left out of the averages and
    reported as warnings.  Example:

      fttrpca bench --dims 30,30,30,30 --tt-rank 3,3,3 --nr 0.05,0.10 --repeats 10
    '''

    def __init__(self, arg_list):
        super().__init__('bench')
        parser = command_parser(self, 'bench', '--dims D,... --tt-rank R,... [options]')
        parser.add_argument('--dims', type = int_list, required = True,
                            metavar = 'D,...', help = 'tensor extents d_1,...,d_K')
        parser.add_argument('--tt-rank', type = int_list, required = True,
                            metavar = 'R,...', help = 'TT rank r_1,...,r_{K-1}')
        parser.add_argument('--nr', type = ratio_list, default = [0.05],
                            metavar = 'NR,...', help = 'noise ratios (default: 0.05)')
        parser.add_argument('--solvers', type = solver_list, default = list(_SOLVERS),
                            metavar = 'S,...', help = 'solvers to run (default: all)')
        parser.add_argument('--repeats', type = positive_int, default = 1,
                            metavar = 'N', help = 'instances per configuration')
        parser.add_argument('--parallel', type = positive_int, default = 1,
                            metavar = 'N', help = 'number of trials run at once')
        parser.add_argument('--rank-scale', type = positive_float, metavar = 'Q',
                            help = 'rank scale for the fttnn Tucker rank')
        parser.add_argument('--sweep-q', type = float_range, metavar = 'A:S:B',
                            help = 'sweep the rank scale over a range')
        parser.add_argument('--corruption', choices = CORRUPTION_KINDS,
                            default = 'sign', help = 'how entries are corrupted')
        parser.add_argument('--out', metavar = 'FILE',
                            help = 'write the CSV table to FILE (default: stdout)')
        add_solver_options(parser)

        if not arg_list or 'help' in arg_list:
            parser.print_help()
            return
        args = parser.parse_args(arg_list)

        defaults = Config.solver_defaults()
        seed = defaults['seed'] if args.seed is None else args.seed
        q = defaults['rank_scale'] if args.rank_scale is None else args.rank_scale
        cfg = Config.solver_config(**solver_overrides(args))

        rows = []
        for nr in args.nr:
            spec = SyntheticSpec(args.dims, args.tt_rank, nr, rank_scale = q,
                                 seed = seed, corruption = args.corruption)
            if args.sweep_q:
                rows += rank_sweep(spec, args.sweep_q, cfg, args.solvers,
                                   args.repeats, args.parallel)
            else:
                rows += run_benchmark(spec, replace(cfg, rank = None), args.solvers,
                                      args.repeats, args.parallel)
        for row in rows:
            if row.failures:
                warn(f'{row.solver} failed in {pluralized("trial", row.failures, True)}'
                     f' (nr {row.nr:g}, q {row.q:g}): {row.error}')

        log(f'writing {pluralized("row", rows, True)} of results')
        if args.out:
            try:
                with open(args.out, 'w', newline = '') as f:
                    write_csv(rows, f)
            except OSError as ex:
                raise FileError(f'cannot write {args.out}: {ex.strerror or ex}')
            inform(f'Wrote {pluralized("row", rows, True)} to {args.out}.')
        else:
            write_csv(rows, sys.stdout)
