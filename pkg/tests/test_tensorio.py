import numpy as np
import pytest
import struct
import sys
sys.path.append('..')

from fttrpca.exceptions import CorruptedContent, FileError
from fttrpca.tensorio import *


def _encoded(shape = (2, 3), seed = 0):
    return dumps(np.random.default_rng(seed).standard_normal(shape))


def test_header_layout():
    t = np.arange(6, dtype = float).reshape((2, 3))
    data = dumps(t)
    assert data[:4] == b'TNSR'
    assert data[4] == 1
    assert struct.unpack('<III', data[5:17]) == (2, 2, 3)
    assert len(data) == 17 + 6 * 8
    # Values are stored in column-major order.
    assert np.array_equal(np.frombuffer(data[17:], dtype = '<f8'),
                          [0, 3, 1, 4, 2, 5])


@pytest.mark.parametrize('shape', [(2, 3), (4, 1, 5), (2, 2, 2, 2, 3)])
def test_roundtrip_is_exact(shape):
    t = np.random.default_rng(1).standard_normal(shape)
    assert np.array_equal(loads(dumps(t)), t)


def test_bad_magic():
    with pytest.raises(CorruptedContent) as ex:
        loads(b'TNSX' + _encoded()[4:])
    assert ex.value.offset == 0


def test_bad_version():
    data = bytearray(_encoded())
    data[4] = 2
    with pytest.raises(CorruptedContent) as ex:
        loads(bytes(data))
    assert ex.value.offset == 4


def test_bad_order():
    data = b'TNSR' + bytes([1]) + struct.pack('<II', 1, 5) + bytes(40)
    with pytest.raises(CorruptedContent) as ex:
        loads(data)
    assert ex.value.offset == 5


def test_zero_extent():
    data = b'TNSR' + bytes([1]) + struct.pack('<III', 2, 0, 3)
    with pytest.raises(CorruptedContent) as ex:
        loads(data)
    assert ex.value.offset == 9


def test_truncated_header():
    with pytest.raises(CorruptedContent) as ex:
        loads(_encoded()[:11])
    assert ex.value.offset == 9


def test_truncated_data():
    data = _encoded()
    with pytest.raises(CorruptedContent) as ex:
        loads(data[:-3])
    assert ex.value.offset == len(data) - 3
    assert 'byte offset' in str(ex.value)


def test_trailing_bytes():
    data = _encoded()
    with pytest.raises(CorruptedContent) as ex:
        loads(data + b'\0')
    assert ex.value.offset == len(data)


def test_files(tmp_path):
    t = np.random.default_rng(2).standard_normal((3, 4, 5))
    path = str(tmp_path / 'x.tnsr')
    write_tensor(path, t)
    assert np.array_equal(read_tensor(path), t)


def test_file_errors(tmp_path):
    with pytest.raises(FileError):
        read_tensor(str(tmp_path / 'missing.tnsr'))
    path = tmp_path / 'bad.tnsr'
    path.write_bytes(_encoded()[:-8])
    with pytest.raises(CorruptedContent) as ex:
        read_tensor(str(path))
    assert 'bad.tnsr' in str(ex.value)
    assert ex.value.offset is not None
