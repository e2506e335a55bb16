'''
fttrpca: fast tensor robust principal component analysis

Decomposes an observed tensor into a low-TT-rank component and a sparse
component by minimizing the tensor-train nuclear norm of a small Tucker core
instead of the full tensor.  A baseline solver that works on the full tensor
is included for comparison.

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

# Package metadata ~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~~
#
# Keep these in sync with codemeta.json.

__version__     = '0.1.0'
__description__ = 'Fast tensor robust PCA under a hybrid Tucker/tensor-train model'
__url__         = 'https://github.com/fttrpca/fttrpca'
__author__      = 'The fttrpca authors'
__email__       = ''
__license__     = 'BSD 3-clause'


# Miscellaneous utilities.
# .............................................................................

def print_version():
    print(f'fttrpca version {__version__}')
    print(f'Authors: {__author__}')
    print(f'URL: {__url__}')
    print(f'License: {__license__}')


# Miscellaneous constants.
# .............................................................................

# File name extension for tensors written in the TNSR1 binary format.
_TENSOR_EXT = '.tnsr'

# Names of the solvers, in the order they are reported.
_SOLVERS = ('fttnn', 'ttnn')
