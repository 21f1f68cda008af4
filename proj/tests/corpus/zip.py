# DOS date/time packing for a ZIP local file header.
import struct

from itest import Here


def file_header(dt, compress_type, crc, compress_size, file_size):
    dosdate = (dt[0] - 1980) << 9 | dt[1] << 5 | dt[2]
    Here().given(dt, (1980, 1, 25, 17, 13, 14)).check_eq(dosdate, 57)
    dostime = dt[3] << 11 | dt[4] << 5 | dt[5] >> 1
    Here().given(dt, (1980, 1, 25, 17, 13, 14)).check_eq(dostime, 35239)
    return struct.pack("<4s2B4HL2L2H", b"PK\003\004", 20, 0, 0, compress_type,
                       dostime, dosdate, crc, compress_size, file_size, 0, 0)
