'''
corrupt.py: the "corrupt" command, which adds sparse noise to a tensor file

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

import numpy as np

from   fttrpca.command import Command, command_parser, ratio, value_range
from   fttrpca.command import nonnegative_int
from   fttrpca.config import Config
from   fttrpca.harness import CORRUPTION_KINDS, corrupt, rse
from   fttrpca.log import log
from   fttrpca.tensorio import read_tensor, write_tensor
from   fttrpca.ui import inform


class CorruptCommand(Command):
    '''Corrupt a random fraction of the entries of a tensor.

    Reads a TNSR1 tensor from INPUT, corrupts the fraction --nr of its
    entries (chosen uniformly at random), and writes the result to OUTPUT.
    By default the chosen entries are replaced by values drawn uniformly
    from the range given by --range, which is 0,255 unless given.  With
    "--kind sign", +1 or -1 is added to them instead.  This can be used to
    prepare a stack of images for denoising with the "solve" command.
    Example:

      fttrpca corrupt stack.tnsr noisy.tnsr --nr 0.2 --seed 1
    '''

    def __init__(self, arg_list):
        super().__init__('corrupt')
        parser = command_parser(self, 'corrupt', 'INPUT OUTPUT [options]')
        parser.add_argument('input', metavar = 'INPUT', help = 'TNSR1 tensor file')
        parser.add_argument('output', metavar = 'OUTPUT', help = 'file to write')
        parser.add_argument('--nr', type = ratio, default = 0.2, metavar = 'NR',
                            help = 'fraction of corrupted entries (default: 0.2)')
        parser.add_argument('--kind', choices = CORRUPTION_KINDS, default = 'uniform',
                            help = 'how entries are corrupted (default: uniform)')
        parser.add_argument('--range', type = value_range, default = (0, 255),
                            metavar = 'LOW,HIGH', help = 'range of replacement values')
        parser.add_argument('--seed', type = nonnegative_int, metavar = 'S',
                            help = 'random seed')

        if not arg_list or 'help' in arg_list:
            parser.print_help()
            return
        args = parser.parse_args(arg_list)

        seed = Config.solver_defaults()['seed'] if args.seed is None else args.seed
        clean = read_tensor(args.input)
        noisy, sparse = corrupt(clean, args.nr, np.random.default_rng(seed),
                                kind = args.kind, value_range = args.range)
        write_tensor(args.output, noisy)
        changed = int(np.count_nonzero(sparse))
        log(f'corrupted {changed} of {clean.size} entries')
        if changed and np.any(clean):
            inform(f'Corrupted {changed} of {clean.size} entries; relative error'
                   f' of the result is {rse(noisy, clean):.4g}.')
        else:
            inform(f'Corrupted {changed} of {clean.size} entries.')
