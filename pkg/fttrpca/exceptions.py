'''
exceptions.py: exceptions defined by fttrpca

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''


# Base class.
# .............................................................................
# The base class makes it possible to use a single test to distinguish between
# exceptions generated by fttrpca code and exceptions generated by something
# else.

class FttrpcaException(Exception):
    '''Base class for fttrpca exceptions.'''
    pass


# Exception classes.
# .............................................................................

class CannotProceed(FttrpcaException):
    '''A recognizable condition caused an early exit from the program.'''
    pass

class UserCancelled(FttrpcaException):
    '''The user elected to cancel/quit the program.'''
    pass

class CorruptedContent(FttrpcaException):
    '''Content of a tensor file could not be parsed.

    The attribute 'offset' holds the byte offset at which parsing failed.
    '''
    def __init__(self, msg, offset = None):
        if offset is not None:
            msg = f'{msg} (at byte offset {offset})'
        super().__init__(msg)
        self.offset = offset

class InternalError(FttrpcaException):
    '''Unrecoverable problem involving fttrpca itself.'''
    pass

class FileError(FttrpcaException):
    '''Problem reading or writing a file or its attributes.'''
    pass

class DimensionMismatch(FttrpcaException, ValueError):
    '''Tensor, matrix or parameter shapes are inconsistent.'''
    pass

class InvalidArgument(FttrpcaException, ValueError):
    '''A parameter value is outside of its permitted range.'''
    pass

class NumericalError(FttrpcaException, ArithmeticError):
    '''A numerical routine failed, e.g., an SVD did not converge.'''
    pass
