"""FNV-1a 64-bit hashing.

Used for customer keys, subword bucket indices, and row fingerprints so
every artifact that names a customer agrees byte for byte.
"""

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a_64(data: bytes) -> int:
    """Return the FNV-1a 64-bit hash of ``data`` as an unsigned integer."""
    h = FNV64_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV64_PRIME) & _MASK64
    return h


def fnv1a_64_hex(data: bytes) -> str:
    """Return the FNV-1a 64-bit hash as 16 lowercase hex characters."""
    return format(fnv1a_64(data), "016x")
