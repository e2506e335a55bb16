import sys
sys.path.append('..')
from fttrpca.exceptions import *


def test_exceptions():
    try:
        raise InternalError('foo')
    except Exception as ex:
        assert isinstance(ex, FttrpcaException)


def test_value_errors():
    # Callers that only know about ValueError can still catch these.
    for cls in [DimensionMismatch, InvalidArgument]:
        try:
            raise cls('bad')
        except ValueError as ex:
            assert isinstance(ex, FttrpcaException)
    assert issubclass(NumericalError, ArithmeticError)


def test_corrupted_content_offset():
    ex = CorruptedContent('truncated data', 17)
    assert ex.offset == 17
    assert 'byte offset 17' in str(ex)
    ex = CorruptedContent('no offset')
    assert ex.offset is None
    assert str(ex) == 'no offset'
