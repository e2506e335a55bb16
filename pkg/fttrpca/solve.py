'''
solve.py: the "solve" command, which decomposes a tensor read from a file

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

from   commonpy.file_utils import filename_basename
from   dataclasses import replace
import json
from   os.path import join, basename

from   fttrpca import _TENSOR_EXT
from   fttrpca.command import Command, command_parser, add_solver_options
from   fttrpca.command import solver_overrides, solver_name, int_list
from   fttrpca.config import Config, output_directory
from   fttrpca.exceptions import InvalidArgument
from   fttrpca.log import log
from   fttrpca.solver import SOLVERS
from   fttrpca.tensorio import read_tensor, write_tensor
from   fttrpca.ui import inform, warn


class SolveCommand(Command):
    '''Split a tensor into low-rank and sparse parts.

    The input is a tensor in the TNSR1 format.  The low-rank part X and the
    sparse part S are written to the directory given by --out (default: the
    configured output directory) as <name>-X.tnsr and <name>-S.tnsr, where
    <name> is the input file name without its extension.  A one-line JSON
    report with the iteration count, the convergence status, the solve time
    and the effective parameters is printed on the standard output.

    The fttnn solver needs the Tucker rank of its core, given with --rank as
    one value per mode.  The ttnn solver works on the full tensor and takes
    no rank.  Example:

      fttrpca solve Y.tnsr --solver fttnn --rank 4,11,11,4 --out results/
    '''

    def __init__(self, arg_list):
        super().__init__('solve')
        parser = command_parser(self, 'solve', 'INPUT [options]')
        parser.add_argument('input', metavar = 'INPUT', help = 'TNSR1 tensor file')
        parser.add_argument('--solver', type = solver_name, default = 'fttnn',
                            help = 'fttnn (default) or ttnn')
        parser.add_argument('--rank', type = int_list, metavar = 'R,...',
                            help = 'Tucker rank R_1,...,R_K of the fttnn core')
        parser.add_argument('--out', metavar = 'DIR',
                            help = 'directory where X and S are written')
        add_solver_options(parser)

        if not arg_list or 'help' in arg_list:
            parser.print_help()
            return
        args = parser.parse_args(arg_list)

        out_dir = output_directory(args.out)
        Y = read_tensor(args.input)
        cfg = Config.solver_config(**solver_overrides(args))
        if args.solver == 'fttnn':
            if not args.rank:
                raise InvalidArgument('the fttnn solver needs --rank')
            cfg = replace(cfg, rank = tuple(args.rank))
        elif args.rank:
            warn('--rank is ignored by the ttnn solver.')

        result = SOLVERS[args.solver](Y, cfg)
        report = result.report
        if not report.converged:
            warn(f'{args.solver} stopped at the iteration limit ({report.iters})'
                 ' without converging.')

        name = filename_basename(basename(args.input))
        for part, tensor in [('X', result.X), ('S', result.S)]:
            write_tensor(join(out_dir, f'{name}-{part}{_TENSOR_EXT}'), tensor)
        inform(f'Wrote {name}-X{_TENSOR_EXT} and {name}-S{_TENSOR_EXT} to {out_dir}.')
        log(f'solve report: {report.to_dict()}')
        print(json.dumps(report.to_dict()))
