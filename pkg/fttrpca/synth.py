'''
synth.py: the "synth" command, which generates synthetic problem instances

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

from   dataclasses import replace
import json
from   os.path import join

from   fttrpca import _TENSOR_EXT
from   fttrpca.command import Command, command_parser, add_solver_options
from   fttrpca.command import solver_overrides, int_list, ratio, positive_float
from   fttrpca.command import solver_name
from   fttrpca.config import Config, output_directory
from   fttrpca.harness import SyntheticSpec, CORRUPTION_KINDS, gen_synthetic
from   fttrpca.harness import given_rank, rse
from   fttrpca.log import log
from   fttrpca.solver import SOLVERS
from   fttrpca.tensor_core import frobenius
from   fttrpca.tensorio import write_tensor
from   fttrpca.ui import inform, warn


class SynthCommand(Command):
    '''Generate a synthetic tensor robust PCA problem.

    The low-rank tensor X0 is contracted from tensor-train cores with
    standard Gaussian entries and the TT rank given by --tt-rank.  A fraction
    --nr of its entries, chosen uniformly at random, is corrupted to give the
    observation Y = X0 + S0.  By default each corrupted entry gets +1 or -1
    added to it; with "--corruption uniform", it is replaced by a value drawn
    uniformly from [0, 255].

    Y, X0 and S0 are written as TNSR1 files named Y.tnsr, X0.tnsr and
    S0.tnsr in the directory given by --out (default: the configured output
    directory).  With --solve, the instance is solved right away and a
    one-line JSON report with the relative errors is printed; files are then
    written only if --out is also given.  Example:

      fttrpca synth --dims 30,30,30,30 --tt-rank 3,3,3 --nr 0.05 --seed 7 --out data/
    '''

    def __init__(self, arg_list):
        super().__init__('synth')
        parser = command_parser(self, 'synth', '--dims D,... --tt-rank R,... [options]')
        parser.add_argument('--dims', type = int_list, required = True,
                            metavar = 'D,...', help = 'tensor extents d_1,...,d_K')
        parser.add_argument('--tt-rank', type = int_list, required = True,
                            metavar = 'R,...', help = 'TT rank r_1,...,r_{K-1}')
        parser.add_argument('--nr', type = ratio, default = 0.05, metavar = 'NR',
                            help = 'fraction of corrupted entries (default: 0.05)')
        parser.add_argument('--corruption', choices = CORRUPTION_KINDS,
                            default = 'sign', help = 'how entries are corrupted')
        parser.add_argument('--out', metavar = 'DIR',
                            help = 'directory where the tensors are written')
        parser.add_argument('--solve', type = solver_name, metavar = 'SOLVER',
                            help = 'solve the instance with fttnn or ttnn')
        parser.add_argument('--rank', type = int_list, metavar = 'R,...',
                            help = 'Tucker rank for fttnn (default: from --rank-scale)')
        parser.add_argument('--rank-scale', type = positive_float, metavar = 'Q',
                            help = 'rank scale for the default Tucker rank')
        add_solver_options(parser)

        if not arg_list or 'help' in arg_list:
            parser.print_help()
            return
        args = parser.parse_args(arg_list)

        defaults = Config.solver_defaults()
        seed = defaults['seed'] if args.seed is None else args.seed
        q = defaults['rank_scale'] if args.rank_scale is None else args.rank_scale
        spec = SyntheticSpec(args.dims, args.tt_rank, args.nr, rank_scale = q,
                             seed = seed, corruption = args.corruption)
        instance = gen_synthetic(spec)

        if not args.solve or args.out:
            self._write(instance, output_directory(args.out))
        if args.solve:
            self._solve(instance, args)


    def _write(self, instance, out_dir):
        for name in ['Y', 'X0', 'S0']:
            path = join(out_dir, name + _TENSOR_EXT)
            write_tensor(path, getattr(instance, name))
        inform(f'Wrote Y, X0 and S0 to {out_dir}.')


    def _solve(self, instance, args):
        cfg = Config.solver_config(**solver_overrides(args))
        spec = instance.spec
        if args.solve == 'fttnn':
            rank = args.rank or given_rank(spec.tt_rank, spec.rank_scale, spec.dims)
            cfg = replace(cfg, rank = tuple(rank))
        elif args.rank:
            warn('--rank is ignored by the ttnn solver.')
        result = SOLVERS[args.solve](instance.Y, cfg)
        rse_s = rse(result.S, instance.S0) if frobenius(instance.S0) > 0 else None
        report = {'solver'      : args.solve,
                  'rse_x'       : rse(result.X, instance.X0),
                  'rse_s'       : rse_s,
                  'iters'       : result.report.iters,
                  'converged'   : result.report.converged,
                  'wall_time_s' : result.report.wall_time}
        log(f'synth --solve report: {report}')
        print(json.dumps(report))
