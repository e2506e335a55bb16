'''
tensorio.py: read and write tensors in the TNSR1 binary format

Layout of a TNSR1 file (all integers are unsigned 32-bit little-endian):

  offset 0        magic bytes b'TNSR'
  offset 4        version byte, equal to 1
  offset 5        K, the order of the tensor
  offset 9        K extents d_1 ... d_K
  offset 9 + 4K   d_1 ... d_K little-endian 64-bit floats, column-major order

Copyright
---------

Copyright (c) 2022 by the fttrpca authors.  This code is open-source software
released under a 3-clause BSD license.  Please see the file "LICENSE" for more
information.
'''

from   math import prod
import numpy as np
import struct

from   fttrpca.exceptions import CorruptedContent, FileError
from   fttrpca.log import log
from   fttrpca.tensor_core import as_tensor, MIN_ORDER, MAX_ORDER


# Constants.
# .............................................................................

MAGIC   = b'TNSR'
VERSION = 1

_UINT32 = struct.Struct('<I')
_FLOAT  = np.dtype('<f8')


# Exported functions.
# .............................................................................

def dumps(t):
    '''Return the TNSR1 encoding of tensor 't' as bytes.'''
    t = as_tensor(t)
    header = MAGIC + bytes([VERSION]) + _UINT32.pack(t.ndim)
    header += b''.join(_UINT32.pack(d) for d in t.shape)
    return header + np.ravel(t, order = 'F').astype(_FLOAT).tobytes()


def loads(data):
    '''Decode TNSR1 bytes into a float64 ndarray.

    Raises CorruptedContent naming the byte offset where decoding failed.
    '''
    if len(data) < len(MAGIC) or data[:len(MAGIC)] != MAGIC:
        raise CorruptedContent('not a TNSR1 tensor: bad magic bytes', 0)
    offset = len(MAGIC)
    if len(data) <= offset:
        raise CorruptedContent('truncated header: missing version byte', offset)
    if data[offset] != VERSION:
        raise CorruptedContent(f'unsupported TNSR version {data[offset]}', offset)
    offset += 1

    order = _read_uint32(data, offset, 'tensor order')
    if not MIN_ORDER <= order <= MAX_ORDER:
        raise CorruptedContent(f'unsupported tensor order {order}', offset)
    offset += _UINT32.size

    dims = []
    for i in range(order):
        extent = _read_uint32(data, offset, f'extent {i + 1}')
        if extent < 1:
            raise CorruptedContent(f'extent {i + 1} is zero', offset)
        dims.append(extent)
        offset += _UINT32.size

    expected = prod(dims) * _FLOAT.itemsize
    available = len(data) - offset
    if available < expected:
        raise CorruptedContent(f'truncated data: expected {expected} bytes of'
                               f' values but found {available}', offset + available)
    if available > expected:
        raise CorruptedContent(f'{available - expected} unexpected trailing'
                               ' bytes', offset + expected)
    values = np.frombuffer(data, dtype = _FLOAT, count = prod(dims), offset = offset)
    return np.reshape(values.astype(np.float64), dims, order = 'F')


def read_tensor(path):
    '''Read a TNSR1 file and return the tensor it contains.'''
    log(f'reading tensor from {path}')
    try:
        with open(path, 'rb') as f:
            data = f.read()
    except OSError as ex:
        raise FileError(f'cannot read {path}: {ex.strerror or ex}')
    try:
        t = loads(data)
    except CorruptedContent as ex:
        failure = CorruptedContent(f'{path}: {ex}')
        failure.offset = ex.offset
        raise failure from ex
    log(f'read tensor of shape {t.shape} from {path}')
    return t


def write_tensor(path, t):
    '''Write tensor 't' to 'path' in TNSR1 format.'''
    encoded = dumps(t)
    log(f'writing tensor of shape {np.shape(t)} to {path}')
    try:
        with open(path, 'wb') as f:
            f.write(encoded)
    except OSError as ex:
        raise FileError(f'cannot write {path}: {ex.strerror or ex}')


# Miscellaneous utilities local to this module.
# .............................................................................

def _read_uint32(data, offset, what):
    if len(data) < offset + _UINT32.size:
        raise CorruptedContent(f'truncated header: missing {what}', offset)
    return _UINT32.unpack_from(data, offset)[0]
