"""Finite fields GF(p^k) with integer-encoded elements.

Elements are the integers 0..q-1.  For a prime field the integer is the
residue itself.  For an extension field the base-p digits of the integer
are the polynomial-basis coordinates: e = sum_i c_i p^i encodes
c_0 + c_1 x + ... + c_{k-1} x^{k-1} reduced modulo the field's
irreducible modulus.

The modulus chosen for GF(p^k) is the monic irreducible degree-k
polynomial over GF(p) with the smallest integer encoding (equivalently
the lexicographically first coefficient vector), so the same q always
produces the same field labeling.

Prime fields are supported up to 2^31; extension fields up to 2^16,
where multiplicative log/exp tables stay cheap.  Large orders are only
ever needed as primes, extension fields only small.
"""

from __future__ import annotations

from .errors import FieldTooLargeError, NotPrimePowerError

MAX_PRIME_ORDER = 2**31
MAX_EXTENSION_ORDER = 2**16
MAX_PRIME_SEARCH = 2**40

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(x: int) -> int:
    """Smallest prime >= x."""
    if x < 2:
        raise ValueError("next_prime requires x >= 2")
    if x > MAX_PRIME_SEARCH:
        raise FieldTooLargeError(f"prime search above {MAX_PRIME_SEARCH} not supported")
    n = x
    while not is_prime(n):
        n += 1
    return n


def prime_power_decompose(q: int) -> tuple[int, int] | None:
    """Return (p, k) with q = p^k and p prime, or None."""
    if q < 2:
        return None
    p = None
    for c in range(2, q + 1):
        if c * c > q:
            p = q  # q itself prime
            break
        if q % c == 0:
            p = c
            break
    k = 0
    m = q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        return None
    return p, k


def next_prime_power(x: int) -> int:
    """Smallest prime power >= max(x, 2)."""
    n = max(x, 2)
    while prime_power_decompose(n) is None:
        n += 1
    return n


# -- polynomial helpers over GF(p), little-endian coefficient lists --------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_reduce(out, mod, p)


def _poly_reduce(a: list[int], mod: list[int], p: int) -> list[int]:
    # mod is monic; reduce in place from the top
    a = list(a)
    k = len(mod) - 1
    for i in range(len(a) - 1, k - 1, -1):
        c = a[i]
        if c:
            a[i] = 0
            for j in range(k):
                a[i - k + j] = (a[i - k + j] - c * mod[j]) % p
    _poly_trim(a)
    return a


def _poly_divides(d: list[int], a: list[int], p: int) -> bool:
    # both little-endian, d nonzero
    r = list(a)
    _poly_trim(r)
    inv_lead = pow(d[-1], p - 2, p)
    while len(r) >= len(d):
        c = r[-1] * inv_lead % p
        shift = len(r) - len(d)
        for j in range(len(d)):
            r[shift + j] = (r[shift + j] - c * d[j]) % p
        _poly_trim(r)
        if not r:
            return True
    return not r


def _int_to_poly(e: int, p: int) -> list[int]:
    digits = []
    while e:
        digits.append(e % p)
        e //= p
    return digits


def _poly_to_int(a: list[int], p: int) -> int:
    v = 0
    for c in reversed(a):
        v = v * p + c
    return v


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    k = len(poly) - 1
    if k <= 0:
        return False
    if poly[0] == 0:  # divisible by x
        return k == 1
    for d in range(1, k // 2 + 1):
        for low in range(p**d):
            div = _int_to_poly(low, p)
            div += [0] * (d - len(div)) + [1]
            if _poly_divides(div, poly, p):
                return False
    return True


def _smallest_irreducible(p: int, k: int) -> list[int]:
    for low in range(p**k):
        cand = _int_to_poly(low, p)
        cand += [0] * (k - len(cand)) + [1]
        if _is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # cannot happen


class FieldSpec:
    """A finite field GF(q) = GF(p^k); immutable once constructed.

    Use :func:`make_field` to build one.  All arithmetic methods take and
    return integer encodings in 0..q-1.
    """

    __slots__ = ("q", "p", "k", "modulus", "_exp", "_log", "_add_table")

    def __init__(self, q: int, p: int, k: int, modulus: tuple[int, ...] | None):
        self.q = q
        self.p = p
        self.k = k
        self.modulus = modulus  # descending coefficients (c_k, ..., c_0), k > 1 only
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._add_table: list[list[int]] | None = None
        if k > 1:
            self._build_tables()

    # -- construction internals --------------------------------------------

    def _modulus_ascending(self) -> list[int]:
        return list(reversed(self.modulus))

    def _raw_mul(self, a: int, b: int) -> int:
        mod = self._modulus_ascending()
        pa = _int_to_poly(a, self.p)
        pb = _int_to_poly(b, self.p)
        return _poly_to_int(_poly_mulmod(pa, pb, mod, self.p), self.p)

    def _build_tables(self) -> None:
        q, p = self.q, self.p
        # find a multiplicative generator by stepping powers
        for g in range(2, q):
            exp = [1]
            v = 1
            while True:
                v = self._raw_mul(v, g)
                if v == 1:
                    break
                exp.append(v)
            if len(exp) == q - 1:
                break
        else:
            raise AssertionError("no generator found")  # cyclic group; cannot happen
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._exp = exp
        self._log = log
        if q <= 256:
            # dense addition table; digit arithmetic on demand above this
            digs = [_int_to_poly(e, p) for e in range(q)]
            for d in digs:
                d.extend([0] * (self.k - len(d)))
            self._add_table = [
                [
                    _poly_to_int([(da[i] + db[i]) % p for i in range(self.k)], p)
                    for db in digs
                ]
                for da in digs
            ]

    # -- arithmetic ----------------------------------------------------------

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ValueError(f"element {a} out of range for GF({self.q})")
        return a

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.q
        if self._add_table is not None:
            return self._add_table[a][b]
        p = self.p
        da, db = _int_to_poly(a, p), _int_to_poly(b, p)
        if len(da) < len(db):
            da, db = db, da
        for i, c in enumerate(db):
            da[i] = (da[i] + c) % p
        return _poly_to_int(da, p)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.q
        p = self.p
        return _poly_to_int([(-c) % p for c in _int_to_poly(a, p)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.q
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        if self.k == 1:
            return pow(a, self.q - 2, self.q)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.k == 1:
            return pow(a, e, self.q)
        return self._exp[self._log[a] * e % (self.q - 1)]

    def elements(self) -> range:
        return range(self.q)

    # -- identity and serialization ------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("FieldSpec", self.q))

    def __repr__(self) -> str:
        return f"FieldSpec({self.header()})"

    def header(self) -> str:
        """Field token for file headers: GF(q) or GF(p^k;modulus=c_k,...,c_0)."""
        if self.k == 1:
            return f"GF({self.q})"
        coeffs = ",".join(str(c) for c in self.modulus)
        return f"GF({self.p}^{self.k};modulus={coeffs})"


def make_field(q: int) -> FieldSpec:
    """Construct GF(q) deterministically.

    Raises NotPrimePowerError unless q is a prime power >= 2, and
    FieldTooLargeError beyond the supported orders (2^31 for primes,
    2^16 for extension fields).
    """
    if q < 2:
        raise NotPrimePowerError(f"field order must be >= 2, got {q}")
    if q > MAX_PRIME_ORDER:
        raise FieldTooLargeError(f"field order {q} exceeds {MAX_PRIME_ORDER}")
    decomp = prime_power_decompose(q)
    if decomp is None:
        raise NotPrimePowerError(f"{q} is not a prime power")
    p, k = decomp
    if k == 1:
        return FieldSpec(q, p, 1, None)
    if q > MAX_EXTENSION_ORDER:
        raise FieldTooLargeError(
            f"extension field order {q} exceeds {MAX_EXTENSION_ORDER}; only prime fields are supported that large"
        )
    modulus = _smallest_irreducible(p, k)
    return FieldSpec(q, p, k, tuple(reversed(modulus)))


def field_arith(f: FieldSpec, op: str, a: int, b: int = 0) -> int:
    """Dispatch one arithmetic operation: add, sub, mul, inv or pow.

    For pow, b is the exponent; for inv, b is ignored.
    """
    f.check(a)
    if op in ("add", "sub", "mul"):
        f.check(b)
    if op == "add":
        return f.add(a, b)
    if op == "sub":
        return f.sub(a, b)
    if op == "mul":
        return f.mul(a, b)
    if op == "inv":
        return f.inv(a)
    if op == "pow":
        return f.pow(a, b)
    raise ValueError(f"unknown operation {op!r}")


def parse_field_header(token: str) -> FieldSpec:
    """Inverse of FieldSpec.header().  The modulus part is validated."""
    from .errors import MaskFormatError

    t = token.strip()
    if not (t.startswith("GF(") and t.endswith(")")):
        raise MaskFormatError(f"bad field token {token!r}")
    body = t[3:-1]
    if ";" not in body:
        try:
            q = int(body)
        except ValueError as e:
            raise MaskFormatError(f"bad field token {token!r}") from e
        return make_field(q)
    head, mod_part = body.split(";", 1)
    if "^" not in head or not mod_part.startswith("modulus="):
        raise MaskFormatError(f"bad field token {token!r}")
    p_s, k_s = head.split("^", 1)
    try:
        p, k = int(p_s), int(k_s)
        coeffs = tuple(int(c) for c in mod_part[len("modulus="):].split(","))
    except ValueError as e:
        raise MaskFormatError(f"bad field token {token!r}") from e
    f = make_field(p**k)
    if f.modulus != coeffs:
        raise MaskFormatError(
            f"modulus {coeffs} does not match the deterministic modulus {f.modulus} for GF({p}^{k})"
        )
    return f
