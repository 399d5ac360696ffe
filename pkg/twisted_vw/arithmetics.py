"""
Arithmetic Module - twisted_vw

Number theory and lattice combinatorics behind the partition functions:

- Hurwitz class numbers H(n), computed twice (reduced-form enumeration and
  reduction of every bounded form) so the two can be compared
- divisor counts and the Legendre symbols epsilon(m)
- the K3 lattice U^3 + (-E8)^2 and censuses of H^2(K3, Z/r) by the value of
  g^2, computed block by block and convolved
- the counts of trivial / essentially trivial / optimal mu_r-gerbes
"""

import functools
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Set, Tuple

import numpy as np
from sympy import Matrix, divisor_count, legendre_symbol

from .coefficients import CycNum, cyc_root_of_unity
from .errors import InvalidGerbeDataError
from .utils import require_picard, require_prime_rank
from .vw_base import LOGGER_NAME, TRACE

logger = logging.getLogger(LOGGER_NAME)

K3_RANK = 22
HALF_RANK = 11

# Dynkin edges of E8 in Bourbaki numbering (nodes 1..8)
E8_DYNKIN_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))

ENUMERATION_CHUNK = 1 << 16


# ---------------------------------------------------------------------------
# Hurwitz class numbers
# ---------------------------------------------------------------------------


def _require_discriminant(delta: int) -> None:
    if not isinstance(delta, int) or isinstance(delta, bool):
        raise ValueError(f"Invalid discriminant: {delta!r}")
    if delta <= 0:
        raise ValueError(
            f"Hurwitz class number needs a positive discriminant, got {delta} "
            "(no convention for H(0) is adopted)"
        )


@functools.lru_cache(maxsize=None)
def hurwitz_class_number(delta: int) -> Fraction:
    """
    H(delta): classes of positive definite forms ax^2 + bxy + cy^2 with
    b^2 - 4ac = -delta, the classes of a(x^2+y^2) weighted 1/2 and those of
    a(x^2+xy+y^2) weighted 1/3.
    """
    _require_discriminant(delta)
    if delta % 4 in (1, 2):
        return Fraction(0)
    total = Fraction(0)
    a = 1
    while 3 * a * a <= delta:
        for b in range(-a + 1, a + 1):
            if (b - delta) % 2:
                continue
            numerator = b * b + delta
            if numerator % (4 * a):
                continue
            c = numerator // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if a == b == c:
                total += Fraction(1, 3)
            elif b == 0 and a == c:
                total += Fraction(1, 2)
            else:
                total += 1
        a += 1
    return total


def _reduce_form(a: int, b: int, c: int) -> Tuple[int, int, int]:
    """Gauss reduction of a positive definite form to |b| <= a <= c."""
    while True:
        if b > a or b <= -a:
            # b -> b - 2ka lands in (-a, a]
            k = (b + a - 1) // (2 * a)
            c = a * k * k - b * k + c
            b = b - 2 * a * k
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def _form_value(a: int, b: int, c: int, x: int, y: int) -> int:
    return a * x * x + b * x * y + c * y * y


def _automorphism_count(a: int, b: int, c: int) -> int:
    """Elements of SL2(Z) fixing the form (entries of reduced forms' stabilizers lie in [-2, 2])."""
    count = 0
    span = range(-2, 3)
    for p, q, s, t in itertools.product(span, repeat=4):
        if p * t - q * s != 1:
            continue
        if _form_value(a, b, c, p, s) != a or _form_value(a, b, c, q, t) != c:
            continue
        if 2 * a * p * q + b * (p * t + q * s) + 2 * c * s * t == b:
            count += 1
    return count


def hurwitz_class_number_by_reduction(delta: int) -> Fraction:
    """Second oracle: reduce every form with bounded a, b and weight each class by 2/|Aut|."""
    _require_discriminant(delta)
    bound = isqrt(delta) + 1
    classes: Set[Tuple[int, int, int]] = set()
    for a in range(1, bound + 1):
        for b in range(-bound, bound + 1):
            numerator = b * b + delta
            if numerator % (4 * a):
                continue
            classes.add(_reduce_form(a, b, numerator // (4 * a)))
    return sum((Fraction(2, _automorphism_count(*form)) for form in classes), Fraction(0))


def sigma0(n: int) -> int:
    if n < 1:
        raise ValueError(f"divisor count needs n >= 1, got {n}")
    return int(divisor_count(n))


def legendre_epsilon(m: int, r: int) -> int:
    """epsilon(m) = (m/2 | r) for even m, ((m+r)/2 | r) for odd m."""
    require_prime_rank(r)
    if r == 2:
        raise InvalidGerbeDataError("epsilon(m) is defined for odd primes only")
    if m % r == 0:
        raise ValueError(f"epsilon(m) needs m prime to {r}, got m={m}")
    half = m // 2 if m % 2 == 0 else (m + r) // 2
    return int(legendre_symbol(half % r, r))


# ---------------------------------------------------------------------------
# the K3 lattice
# ---------------------------------------------------------------------------


def hyperbolic_plane() -> np.ndarray:
    return np.array([[0, 1], [1, 0]], dtype=np.int64)


def e8_gram() -> np.ndarray:
    gram = 2 * np.eye(8, dtype=np.int64)
    for i, j in E8_DYNKIN_EDGES:
        gram[i - 1, j - 1] = gram[j - 1, i - 1] = -1
    return gram


@dataclass
class K3LatticeForm:
    # 22 x 22 Gram matrix of U^3 + (-E8)^2
    gram: np.ndarray
    # (name, Gram matrix) of each orthogonal summand, in order
    blocks: List[Tuple[str, np.ndarray]] = field(default_factory=list)


def k3_lattice_form() -> K3LatticeForm:
    blocks = [("U", hyperbolic_plane()) for _ in range(3)]
    blocks += [("-E8", -e8_gram()) for _ in range(2)]
    gram = np.zeros((K3_RANK, K3_RANK), dtype=np.int64)
    offset = 0
    for _, block in blocks:
        size = block.shape[0]
        gram[offset:offset + size, offset:offset + size] = block
        offset += size
    return K3LatticeForm(gram=gram, blocks=blocks)


def lattice_checks(form: Optional[K3LatticeForm] = None) -> Dict[str, object]:
    """Determinant, evenness and signature of the Gram matrix."""
    form = form or k3_lattice_form()
    gram = form.gram
    determinant = int(Matrix(gram.tolist()).det())
    even = bool(np.all(np.diag(gram) % 2 == 0))
    symmetric = bool(np.array_equal(gram, gram.T))
    eigenvalues = np.linalg.eigvalsh(gram.astype(float))
    signature = (int(np.sum(eigenvalues > 0)), int(np.sum(eigenvalues < 0)))
    return {
        "determinant": determinant,
        "unimodular": abs(determinant) == 1,
        "even": even,
        "symmetric": symmetric,
        "signature": signature,
    }


def _residue_vectors(rank: int, residues: int, start: int, stop: int) -> np.ndarray:
    """Rows are the base-`residues` digits of the integers start..stop-1."""
    index = np.arange(start, stop, dtype=np.int64)
    powers = residues ** np.arange(rank, dtype=np.int64)
    return (index[:, None] // powers[None, :]) % residues


def _quadratic_values(vectors: np.ndarray, gram: np.ndarray) -> np.ndarray:
    return np.einsum("ij,jk,ik->i", vectors, gram, vectors)


def block_distribution(gram: np.ndarray, residues: int, modulus: int) -> List[int]:
    """counts[v] = #{g in (Z/residues)^rank : g^T gram g = v mod modulus}."""
    rank = gram.shape[0]
    total = residues ** rank
    counts = np.zeros(modulus, dtype=np.int64)
    for start in range(0, total, ENUMERATION_CHUNK):
        stop = min(start + ENUMERATION_CHUNK, total)
        values = _quadratic_values(_residue_vectors(rank, residues, start, stop), gram) % modulus
        counts += np.bincount(values, minlength=modulus)
    logger.log(TRACE, f"block of rank {rank} mod {modulus}: {counts.tolist()}")
    return [int(c) for c in counts]


def _cyclic_convolve(a: List[int], b: List[int], modulus: int) -> List[int]:
    out = [0] * modulus
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[(i + j) % modulus] += x * y
    return out


def _census_modulus(r: int) -> int:
    return 4 if r == 2 else r


def quadratic_form_distribution(r: int) -> List[int]:
    """
    Distribution of g^2 over H^2(K3, Z/r): mod 4 for r = 2 (well defined on an
    even lattice), mod r for odd r.
    """
    require_prime_rank(r)
    modulus = _census_modulus(r)
    form = k3_lattice_form()
    cache: Dict[str, List[int]] = {}
    total = [1] + [0] * (modulus - 1)
    for name, block in form.blocks:
        if name not in cache:
            cache[name] = block_distribution(block, r, modulus)
        total = _cyclic_convolve(total, cache[name], modulus)
    return total


def k3_class_census_bruteforce() -> Tuple[int, int, int]:
    """(n_zero, n_even, n_odd) over H^2(K3, Z/2) by block convolution."""
    distribution = quadratic_form_distribution(2)
    if distribution[1] or distribution[3]:
        raise ArithmeticError(f"odd values of g^2 on an even lattice: {distribution}")
    return 1, distribution[0] - 1, distribution[2]


def _full_census_chunk(gram: np.ndarray, start: int, stop: int) -> np.ndarray:
    values = _quadratic_values(_residue_vectors(K3_RANK, 2, start, stop), gram) % 4
    return np.bincount(values, minlength=4)


def k3_class_census_full(workers: Optional[int] = None) -> Tuple[int, int, int]:
    """Same census by enumerating all 2^22 classes, optionally on worker threads."""
    gram = k3_lattice_form().gram
    total = 1 << K3_RANK
    spans = [(s, min(s + ENUMERATION_CHUNK, total)) for s in range(0, total, ENUMERATION_CHUNK)]
    counts = np.zeros(4, dtype=np.int64)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for partial in pool.map(lambda span: _full_census_chunk(gram, *span), spans):
                counts += partial
    else:
        for start, stop in spans:
            counts += _full_census_chunk(gram, start, stop)
    logger.info(f"🔢 full lattice enumeration over {total} classes: {counts.tolist()}")
    return 1, int(counts[0]) - 1, int(counts[2])


# ---------------------------------------------------------------------------
# gerbe census and Gauss sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GerbeCensus:
    r: int
    rho: int
    n_trivial: int
    n_ess_nontrivial: int
    n_optimal: int
    n_zero_class: int = 1
    # g^2 = 0 / 2 mod 4 among the nonzero classes; rank 2 only
    n_even: Optional[int] = None
    n_odd: Optional[int] = None

    @property
    def total(self) -> int:
        return self.n_trivial + self.n_ess_nontrivial + self.n_optimal

    def to_dict(self) -> dict:
        return asdict(self)


def gerbe_census(rho: int, r: int) -> GerbeCensus:
    require_prime_rank(r)
    require_picard(rho)
    n_even = n_odd = None
    if r == 2:
        n_even = (2 ** K3_RANK + 2 ** HALF_RANK) // 2 - 1
        n_odd = (2 ** K3_RANK - 2 ** HALF_RANK) // 2
    return GerbeCensus(
        r=r,
        rho=rho,
        n_trivial=1,
        n_ess_nontrivial=r ** rho - 1,
        n_optimal=r ** K3_RANK - r ** rho,
        n_even=n_even,
        n_odd=n_odd,
    )


def _gauss_phase(r: int, m: int, value: int) -> CycNum:
    """exp(pi i (r-1) m value / r) for a residue `value` of g^2."""
    if r == 2:
        # value is g^2 mod 4 and even on the K3 lattice
        return CycNum.from_rational(2, -1 if (m * value // 2) % 2 else 1)
    return cyc_root_of_unity(r, ((r - 1) // 2) * m * value)


def gauss_sum_value(m: int, r: int) -> CycNum:
    """sum over g in H^2(K3, Z/r) of exp(pi i (r-1) m g^2 / r), as a product of block sums."""
    require_prime_rank(r)
    if m % r == 0:
        raise ValueError(f"Gauss sum needs m prime to {r}, got m={m}")
    modulus = _census_modulus(r)
    order = 2 if r == 2 else r
    result = CycNum.one(order)
    for name, block in k3_lattice_form().blocks:
        distribution = block_distribution(block, r, modulus)
        block_sum = CycNum.zero(order)
        for value, count in enumerate(distribution):
            if count:
                block_sum = block_sum + _gauss_phase(r, m, value) * count
        logger.log(TRACE, f"Gauss block {name} (m={m}, r={r}): {block_sum!r}")
        result = result * block_sum
    return result


def gauss_sum_expected(m: int, r: int) -> int:
    """epsilon(m)^22 * r^11 (epsilon = 1 for r = 2)."""
    epsilon = 1 if r == 2 else legendre_epsilon(m, r)
    return epsilon ** K3_RANK * r ** HALF_RANK


def gauss_sum_check(m: int, r: int) -> bool:
    if r == 2:
        _, n_even, n_odd = k3_class_census_bruteforce()
        census_value = 1 + n_even - n_odd
        if census_value != gauss_sum_expected(m, r):
            return False
    value = gauss_sum_value(m, r).rational_value()
    return value is not None and value == gauss_sum_expected(m, r)
