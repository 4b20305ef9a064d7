"""LEB128 integer coding.

Encoders always emit the canonical (shortest) form. Decoders accept padded
encodings but reject values that do not fit the declared bit width, matching
reference-interpreter behavior.
"""

from __future__ import annotations

from .errors import DecodeError


def encode_unsigned(value: int) -> bytes:
    if value < 0:
        raise ValueError("unsigned LEB128 cannot encode negative values")
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def encode_signed(value: int) -> bytes:
    out = bytearray()
    while True:
        byte = value & 0x7F
        value >>= 7
        done = (value == 0 and not byte & 0x40) or (value == -1 and byte & 0x40)
        out.append(byte if done else byte | 0x80)
        if done:
            return bytes(out)


def decode_unsigned(data, pos: int = 0, bits: int = 32) -> tuple[int, int]:
    """Decode at `pos`; return (value, new position)."""
    result = 0
    shift = 0
    max_bytes = (bits + 6) // 7
    for i in range(max_bytes):
        if pos + i >= len(data):
            raise DecodeError("truncated LEB128 integer", pos + i)
        byte = data[pos + i]
        result |= (byte & 0x7F) << shift
        shift += 7
        if not byte & 0x80:
            if result >= 1 << bits:
                raise DecodeError(f"LEB128 value out of {bits}-bit range", pos)
            return result, pos + i + 1
    raise DecodeError(f"LEB128 integer exceeds {max_bytes} bytes", pos)


def decode_signed(data, pos: int = 0, bits: int = 32) -> tuple[int, int]:
    result = 0
    shift = 0
    max_bytes = (bits + 6) // 7
    for i in range(max_bytes):
        if pos + i >= len(data):
            raise DecodeError("truncated LEB128 integer", pos + i)
        byte = data[pos + i]
        result |= (byte & 0x7F) << shift
        shift += 7
        if not byte & 0x80:
            if byte & 0x40:
                result |= -1 << shift
            if not -(1 << (bits - 1)) <= result < 1 << (bits - 1):
                raise DecodeError(f"LEB128 value out of s{bits} range", pos)
            return result, pos + i + 1
    raise DecodeError(f"LEB128 integer exceeds {max_bytes} bytes", pos)
