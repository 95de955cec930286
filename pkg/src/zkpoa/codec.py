"""Byte-level helpers shared by the key, proof, bundle and snapshot formats.

All integers are big-endian.  Every read goes through :class:`Reader` so a
malformed file fails with a :class:`ParseError` naming the byte offset.
"""

from __future__ import annotations

import struct

from .errors import ParseError, PoAError, SubgroupError


class Writer:
    def __init__(self):
        self.buf = bytearray()

    def raw(self, data: bytes):
        self.buf += data
        return self

    def u8(self, v):
        self.buf += struct.pack(">B", v)
        return self

    def u16(self, v):
        self.buf += struct.pack(">H", v)
        return self

    def u32(self, v):
        self.buf += struct.pack(">I", v)
        return self

    def u64(self, v):
        self.buf += struct.pack(">Q", v)
        return self

    def blob(self, data: bytes):
        """Length-prefixed (u32) byte string."""
        self.u32(len(data))
        self.buf += data
        return self

    def text(self, s: str):
        data = s.encode()
        self.u8(len(data))
        self.buf += data
        return self

    def scalar(self, v, nbytes):
        self.buf += int(v).to_bytes(nbytes, "big")
        return self

    def getvalue(self) -> bytes:
        return bytes(self.buf)


class Reader:
    def __init__(self, data: bytes, base: int = 0):
        self.data = bytes(data)
        self.pos = 0
        self.base = base

    @property
    def offset(self) -> int:
        return self.base + self.pos

    def take(self, n: int) -> bytes:
        if n < 0 or self.pos + n > len(self.data):
            raise ParseError("unexpected end of data (wanted %d bytes)" % n, self.offset)
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u8(self):
        return self.take(1)[0]

    def u16(self):
        return struct.unpack(">H", self.take(2))[0]

    def u32(self):
        return struct.unpack(">I", self.take(4))[0]

    def u64(self):
        return struct.unpack(">Q", self.take(8))[0]

    def blob(self) -> bytes:
        n = self.u32()
        return self.take(n)

    def text(self) -> str:
        n = self.u8()
        start = self.offset
        try:
            return self.take(n).decode()
        except UnicodeDecodeError:
            raise ParseError("invalid text field", start) from None

    def scalar(self, nbytes, modulus=None):
        start = self.offset
        v = int.from_bytes(self.take(nbytes), "big")
        if modulus is not None and v >= modulus:
            raise ParseError("scalar not reduced", start)
        return v

    def magic(self, expected: bytes, what: str):
        if self.take(len(expected)) != expected:
            raise ParseError("not a %s file" % what, self.base)

    def element(self, decode, nbytes):
        """Decode a fixed-width element; any decoding failure is reported at its offset."""
        start = self.offset
        chunk = self.take(nbytes)
        try:
            return decode(chunk, start)
        except (ParseError, SubgroupError):
            raise
        except (PoAError, ValueError) as exc:
            raise ParseError(str(exc), start) from None

    def done(self):
        if self.pos != len(self.data):
            raise ParseError("%d trailing bytes" % (len(self.data) - self.pos), self.offset)
