#!/usr/bin/env python3
# Denoise a small stack of synthetic color images with the fast solver.
#
# The stack is 32 x 32 pixels x 3 channels x 8 frames, built from a few
# smooth patterns so that it has low TT rank.  20% of the entries are
# replaced by random values in [0, 255], the stack is solved, and the
# relative errors of the noisy and recovered stacks are printed.  The
# clean, noisy and recovered stacks are written as TNSR1 files to the
# directory given as the first argument (default: the current directory).

import numpy as np
from   os.path import join
import sys

sys.path.append('.')

from fttrpca.harness import corrupt, rse
from fttrpca.solver import SolverConfig, fttnn_solve
from fttrpca.tensorio import write_tensor

out_dir = sys.argv[1] if len(sys.argv) > 1 else '.'
rng = np.random.default_rng(11)

grid = np.linspace(0, 1, 32)
patterns = [(np.sin(np.pi * grid), np.cos(np.pi * grid / 2), [0.9, 0.6, 0.3]),
            (grid, 1 - grid, [0.2, 0.5, 0.9]),
            (np.exp(-8 * (grid - 0.5)**2), np.exp(-8 * (grid - 0.3)**2), [0.7, 0.7, 0.7])]
stack = np.zeros((32, 32, 3, 8))
for rows, cols, colors in patterns:
    frames = rng.uniform(0.5, 1.0, size = 8)
    stack += np.einsum('i,j,k,l->ijkl', rows, cols, colors, frames)
stack *= 255 / stack.max()

noisy, _ = corrupt(stack, 0.2, rng, kind = 'uniform', value_range = (0, 255))
result = fttnn_solve(noisy, SolverConfig(rank = (6, 6, 3, 6), tau_scale = 2))

print(f'iterations:                {result.report.iters}')
print(f'relative error, noisy:     {rse(noisy, stack):.4e}')
print(f'relative error, recovered: {rse(result.X, stack):.4e}')

for name, tensor in [('clean', stack), ('noisy', noisy), ('recovered', result.X)]:
    write_tensor(join(out_dir, f'{name}.tnsr'), tensor)
