"""Pure-Python coefficient kernels.

Coefficient vectors are ``bytes``: index = offset from the leading
exponent, value = a coefficient in ``[0, p)``.  These three routines are
the innermost loops of every series computation in the package; the
compiled twin ``wildram._ckernels`` implements the identical API and is
preferred at import time (see ``wildram.kernel``).
"""


def conv(a: bytes, b: bytes, p: int, out_len: int) -> bytes:
    """First ``out_len`` coefficients of the product of a and b."""
    if out_len <= 0:
        return b""
    out = bytearray(out_len)
    la, lb = len(a), len(b)
    if la and lb:
        for i in range(min(la, out_len)):
            ai = a[i]
            if not ai:
                continue
            jmax = min(lb, out_len - i)
            for j in range(jmax):
                bj = b[j]
                if bj:
                    k = i + j
                    out[k] = (out[k] + ai * bj) % p
    return bytes(out)


def inv_series(a: bytes, p: int, out_len: int) -> bytes:
    """First ``out_len`` coefficients of 1/a; requires a[0] != 0."""
    if out_len <= 0:
        return b""
    a0inv = pow(a[0], p - 2, p) if p > 2 else a[0]
    la = len(a)
    out = bytearray(out_len)
    out[0] = a0inv
    for k in range(1, out_len):
        s = 0
        for i in range(1, min(k, la - 1) + 1):
            ai = a[i]
            if ai:
                s += ai * out[k - i]
        out[k] = (-a0inv * s) % p
    return bytes(out)


def cyclic_conv(a: bytes, b: bytes, p: int) -> bytes:
    """Product in F_p[X]/(X^n - 1); a and b have equal length n."""
    n = len(a)
    out = bytearray(n)
    for i in range(n):
        ai = a[i]
        if not ai:
            continue
        for j in range(n):
            bj = b[j]
            if bj:
                k = i + j
                if k >= n:
                    k -= n
                out[k] = (out[k] + ai * bj) % p
    return bytes(out)
