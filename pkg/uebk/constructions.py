"""
Builders for the fixed-Schmidt-number unextendible bases.

Every member is k^{-1/2} sum_p zeta_k^{np} |row(p)>|col(p)'> for p = 0..k-1,
so each family is fully described by how its label tuple maps p to a
(row, column) cell. Labels keep the 1-based block indices (l, i, j) of the
published formulas; everything else is 0-based.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from uebk.config import UebkError, get_logger
from uebk.tensor import BipartiteVector, as_columns

LOG = get_logger()


class ParameterConstraintError(UebkError, ValueError):
    """Throw this exception when (d, d', k, q, m) do not select a valid family."""


class Family(str, Enum):
    PROP1 = "prop1"
    PROP2 = "prop2"
    PROP3 = "prop3"
    PROP4 = "prop4"
    PROP5 = "prop5"
    PROP6 = "prop6"
    EQ8 = "eq8"


class Convention(str, Enum):
    """Reading of the Prop 2 modulus and the Prop 4 range of q."""

    LITERAL = "literal"
    REPAIRED = "repaired"


Q_FAMILIES = (Family.PROP2, Family.PROP4, Family.PROP5, Family.PROP6)
CONVENTION_FAMILIES = (Family.PROP2, Family.PROP4)
UMEB_FAMILIES = (Family.PROP1, Family.EQ8)


def phase(k: int, e: int) -> complex:
    """zeta_k ** e with zeta_k = exp(2 pi i / k)."""
    if k < 1:
        raise ParameterConstraintError(f"Root of unity order must be >= 1, got {k}")
    return complex(np.exp(2j * np.pi * (e % k) / k))


def allowed_m_values(d: int, dprime: int, k: int) -> Tuple[int, ...]:
    """Admissible column moduli m for the d = sk construction, largest first."""
    if k < 1 or d % k:
        raise ParameterConstraintError(f"d={d} is not a multiple of k={k}")
    if dprime >= 2 * d:
        return tuple(range(dprime - 1, dprime - k, -1))
    if d < dprime < 2 * d:
        r = dprime % k
        return tuple(range(dprime - 1, dprime - r - 1, -1))
    return ()


@dataclass(frozen=True)
class FamilyParams:
    """Discrete parameters selecting one construction.

    s, t, r_d and r_dp are always derived from (d, d', k).
    """

    family: Family
    d: int
    dprime: int
    k: int
    q: Optional[int] = None
    m_offset: Optional[int] = None
    convention: Convention = Convention.REPAIRED
    umeb: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        convention = Convention(self.convention)
        if self.family not in CONVENTION_FAMILIES:
            convention = Convention.REPAIRED
        object.__setattr__(self, "convention", convention)
        _validate(self)

    @property
    def s(self) -> int:
        return self.d // self.k

    @property
    def t(self) -> int:
        return self.dprime // self.k

    @property
    def r_d(self) -> int:
        return self.d % self.k

    @property
    def r_dp(self) -> int:
        return self.dprime % self.k

    @property
    def expected_count(self) -> int:
        d, k, s, t, q = self.d, self.k, self.s, self.t, self.q
        if self.family is Family.PROP1:
            return t * k * d
        if self.family is Family.PROP2:
            return (d - q) * t * k
        if self.family is Family.PROP3:
            return s * t * k * k
        if self.family in (Family.PROP4, Family.PROP5):
            return s * k * (t * k - k + q)
        if self.family is Family.PROP6:
            return t * k * (s * k - k + q)
        return s * self.m_offset * k

    @property
    def ambient_dim(self) -> int:
        return self.d * self.dprime

    @property
    def label(self) -> str:
        """Short human label, e.g. ``PROP2 q=1``."""
        text = self.family.name
        if self.q is not None:
            text += f" q={self.q}"
        if self.m_offset is not None:
            text += f" m={self.m_offset}"
        if self.family in CONVENTION_FAMILIES and self.convention is Convention.LITERAL:
            text += " (literal)"
        return text

    @property
    def tag(self) -> str:
        """Stable file-name key."""
        parts = [self.family.value, f"d{self.d}", f"dp{self.dprime}", f"k{self.k}"]
        if self.q is not None:
            parts.append(f"q{self.q}")
        if self.m_offset is not None:
            parts.append(f"m{self.m_offset}")
        if self.family in CONVENTION_FAMILIES:
            parts.append(self.convention.value)
        if self.umeb:
            parts.append("umeb")
        return "-".join(parts)

    def sort_key(self) -> tuple:
        return (
            self.d,
            self.dprime,
            self.k,
            list(Family).index(self.family),
            self.q or 0,
            -(self.m_offset or 0),
            self.convention.value,
            self.umeb,
        )

    def as_dict(self) -> dict:
        return {
            "family": self.family.value,
            "d": self.d,
            "dprime": self.dprime,
            "k": self.k,
            "q": self.q,
            "m_offset": self.m_offset,
            "convention": self.convention.value,
            "umeb": self.umeb,
        }


def check_dimensions(d: int, dprime: int, k: int, umeb: bool = False) -> None:
    """Enforce 2 <= k < d <= d', or k = d < d' in UMEB mode."""
    for name, value in (("d", d), ("dprime", dprime), ("k", k)):
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
            raise ParameterConstraintError(f"{name} must be an integer, got {value!r}")
    if k < 2:
        raise ParameterConstraintError(f"Schmidt number k={k} must be at least 2")
    if d > dprime:
        raise ParameterConstraintError(f"Require d <= d', got d={d} > d'={dprime}")
    if umeb:
        if k != d:
            raise ParameterConstraintError(
                f"UMEB mode requires k = d, got k={k}, d={d}"
            )
        if dprime <= d:
            raise ParameterConstraintError(
                f"UMEB mode requires d' > d, got d={d}, d'={dprime}"
            )
        return
    if k == d:
        raise ParameterConstraintError(
            f"k = d = {d} is only admitted in UMEB mode"
        )
    if k > d:
        raise ParameterConstraintError(f"Require k < d, got k={k}, d={d}")


def q_range(family: Family, d: int, dprime: int, k: int,
            convention: Convention = Convention.REPAIRED) -> range:
    """Admissible values of q for the families that take one."""
    r_d, r_dp = d % k, dprime % k
    if family is Family.PROP2:
        upper = k - r_dp - 1
        if convention is Convention.REPAIRED:
            # rows 0..d-q-1 must still hold k distinct rows
            upper = min(upper, d - k)
        return range(1, upper + 1)
    if family is Family.PROP4:
        if convention is Convention.LITERAL:
            return range(1, k - r_d)
        return range(r_d + 1, k)
    if family in (Family.PROP5, Family.PROP6):
        return range(1, k)
    return range(0)


def _validate(params: FamilyParams) -> None:
    family, d, dprime, k = params.family, params.d, params.dprime, params.k
    check_dimensions(d, dprime, k, umeb=params.umeb)
    if params.umeb and family not in UMEB_FAMILIES:
        raise ParameterConstraintError(
            f"UMEB mode is only defined for PROP1 and EQ8, not {family.name}"
        )
    r_d, r_dp = params.r_d, params.r_dp

    if family in (Family.PROP1, Family.PROP2) and r_dp == 0:
        raise ParameterConstraintError(
            f"{family.name} needs d' = tk + r with 0 < r < k; d'={dprime} is a multiple of k={k}"
        )
    if family in (Family.PROP3, Family.PROP4):
        if r_d == 0 or r_dp != 0:
            raise ParameterConstraintError(
                f"{family.name} needs d = sk + r with 0 < r < k and d' = tk; "
                f"got d mod k = {r_d}, d' mod k = {r_dp}"
            )
    if family in (Family.PROP5, Family.PROP6):
        if r_d != 0 or r_dp != 0:
            raise ParameterConstraintError(
                f"{family.name} needs d = sk and d' = tk; "
                f"got d mod k = {r_d}, d' mod k = {r_dp}"
            )
    if family is Family.EQ8 and r_d != 0:
        raise ParameterConstraintError(f"EQ8 needs d = sk; d={d} is not a multiple of k={k}")

    if family in Q_FAMILIES:
        allowed = q_range(family, d, dprime, k, params.convention)
        if params.q is None:
            raise ParameterConstraintError(f"{family.name} requires q")
        if params.q not in allowed:
            span = f"{allowed.start}..{allowed.stop - 1}" if len(allowed) else "empty"
            raise ParameterConstraintError(
                f"{family.name} at (d, d', k) = ({d}, {dprime}, {k}) under the "
                f"{params.convention.value} convention admits q in {span}, got q={params.q}"
            )
    elif params.q is not None:
        raise ParameterConstraintError(f"{family.name} does not take q")

    if family is Family.EQ8:
        allowed_m = allowed_m_values(d, dprime, k)
        if params.m_offset not in allowed_m:
            raise ParameterConstraintError(
                f"EQ8 at (d, d', k) = ({d}, {dprime}, {k}) admits m in "
                f"{sorted(allowed_m) or 'no value'}, got m={params.m_offset}"
            )
    elif params.m_offset is not None:
        raise ParameterConstraintError(f"{family.name} does not take m")


@dataclass(frozen=True, eq=False)
class UebkFamily:
    """An ordered list of constructed members with their label tuples."""

    params: FamilyParams
    vectors: Tuple[BipartiteVector, ...]
    labels: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(self.vectors))
        object.__setattr__(self, "labels", tuple(tuple(int(x) for x in l) for l in self.labels))
        if len(self.vectors) != len(self.labels):
            raise ParameterConstraintError(
                f"{len(self.vectors)} vectors but {len(self.labels)} labels"
            )

    @property
    def expected_count(self) -> int:
        return self.params.expected_count

    @property
    def k(self) -> int:
        return self.params.k

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def matrix(self) -> np.ndarray:
        return as_columns(self.vectors)

    def replace_vector(self, index: int, vector: BipartiteVector) -> "UebkFamily":
        vectors = list(self.vectors)
        vectors[index] = vector
        return UebkFamily(self.params, tuple(vectors), self.labels)


Cells = Sequence[Tuple[int, int]]


def _member(d: int, dprime: int, k: int, n: int, cells: Cells) -> BipartiteVector:
    amps = np.zeros(d * dprime, dtype=np.complex128)
    norm = 1.0 / np.sqrt(k)
    for p, (row, col) in enumerate(cells):
        amps[row * dprime + col] += phase(k, n * p) * norm
    return BipartiteVector(d, dprime, amps)


def _prop1_cells(params: FamilyParams) -> Iterator[Tuple[tuple, Cells]]:
    d, k = params.d, params.k
    if params.family is Family.PROP1:
        m_values, modulus = range(d), d
    elif params.convention is Convention.LITERAL:
        m_values, modulus = range(d - params.q), d - k + params.q
    else:
        m_values, modulus = range(d - params.q), d - params.q
    for m in m_values:
        for n in range(k):
            for l in range(1, params.t + 1):
                yield (m, n, l), [((p + m) % modulus, (l - 1) * k + p) for p in range(k)]


def _column_shift_cells(params: FamilyParams) -> Iterator[Tuple[tuple, Cells]]:
    k, s, t = params.k, params.s, params.t
    if params.family is Family.PROP3:
        modulus, q = params.dprime, k
    else:
        modulus, q = params.dprime - k + params.q, params.q
    for i in range(1, s + 1):
        for j in range(1, t + 1):
            for m in range(k):
                if j == t and m >= q:
                    continue
                for n in range(k):
                    cells = [
                        ((i - 1) * k + p, ((j - 1) * k + p + m) % modulus)
                        for p in range(k)
                    ]
                    yield (i, j, m, n), cells


def _row_shift_cells(params: FamilyParams) -> Iterator[Tuple[tuple, Cells]]:
    k, s, t, q = params.k, params.s, params.t, params.q
    modulus = params.d - k + q
    for i in range(1, s + 1):
        for j in range(1, t + 1):
            for m in range(k):
                if i == s and m >= q:
                    continue
                for n in range(k):
                    cells = [
                        (((i - 1) * k + p + m) % modulus, (j - 1) * k + p)
                        for p in range(k)
                    ]
                    yield (i, j, m, n), cells


def _eq8_cells(params: FamilyParams) -> Iterator[Tuple[tuple, Cells]]:
    k, modulus = params.k, params.m_offset
    for i in range(1, params.s + 1):
        for j in range(modulus):
            for n in range(k):
                cells = [
                    ((i - 1) * k + p, ((i - 1) * k + p + j) % modulus)
                    for p in range(k)
                ]
                yield (i, j, n), cells


_CELLS: Dict[Family, Callable[[FamilyParams], Iterator[Tuple[tuple, Cells]]]] = {
    Family.PROP1: _prop1_cells,
    Family.PROP2: _prop1_cells,
    Family.PROP3: _column_shift_cells,
    Family.PROP4: _column_shift_cells,
    Family.PROP5: _column_shift_cells,
    Family.PROP6: _row_shift_cells,
    Family.EQ8: _eq8_cells,
}


def build_family(params: FamilyParams) -> UebkFamily:
    """Generate the members of a validated parameter set, in label order."""
    labels, vectors = [], []
    for label, cells in _CELLS[params.family](params):
        # n is always the phase index; it sits in a different slot per family
        n = label[1] if params.family in (Family.PROP1, Family.PROP2) else label[-1]
        labels.append(label)
        vectors.append(_member(params.d, params.dprime, params.k, n, cells))
    LOG.debug(
        "Built %s at (d, d', k) = (%s, %s, %s): %s members",
        params.label, params.d, params.dprime, params.k, len(vectors),
    )
    return UebkFamily(params, tuple(vectors), tuple(labels))


def construct(
    family: Family,
    d: int,
    dprime: int,
    k: int,
    q: Optional[int] = None,
    m_offset: Optional[int] = None,
    convention: Convention = Convention.REPAIRED,
    umeb: bool = False,
) -> UebkFamily:
    params = FamilyParams(
        family=family, d=d, dprime=dprime, k=k, q=q, m_offset=m_offset,
        convention=convention, umeb=umeb,
    )
    return build_family(params)


def construct_prop1(d: int, dprime: int, k: int, umeb: bool = False) -> UebkFamily:
    return construct(Family.PROP1, d, dprime, k, umeb=umeb)


def construct_prop2(d: int, dprime: int, k: int, q: int,
                    convention: Convention = Convention.REPAIRED) -> UebkFamily:
    """d' = tk + r with 1 <= q < k - r.

    The default REPAIRED convention shifts rows modulo d - q and also needs
    q <= d - k. Pass `convention=Convention.LITERAL` for the printed modulus
    d - k + q, which repeats shift blocks whenever k > 2q.
    """
    return construct(Family.PROP2, d, dprime, k, q=q, convention=convention)


def construct_prop3(d: int, dprime: int, k: int) -> UebkFamily:
    return construct(Family.PROP3, d, dprime, k)


def construct_prop4(d: int, dprime: int, k: int, q: int,
                    convention: Convention = Convention.REPAIRED) -> UebkFamily:
    """d = sk + r, d' = tk.

    The default REPAIRED convention takes r < q < k. The printed range
    1 <= q < k - r needs `convention=Convention.LITERAL`; the worked examples
    (4, 6, 3, q=1) and (7, 9, 3, q=1) are only admitted that way.
    """
    return construct(Family.PROP4, d, dprime, k, q=q, convention=convention)


def construct_prop5(d: int, dprime: int, k: int, q: int) -> UebkFamily:
    return construct(Family.PROP5, d, dprime, k, q=q)


def construct_prop6(d: int, dprime: int, k: int, q: int) -> UebkFamily:
    return construct(Family.PROP6, d, dprime, k, q=q)


def construct_eq8(d: int, dprime: int, k: int, m_offset: int,
                  umeb: bool = False) -> UebkFamily:
    return construct(Family.EQ8, d, dprime, k, m_offset=m_offset, umeb=umeb)


def enumerate_families(
    d: int,
    dprime: int,
    k: int,
    convention: Convention = Convention.REPAIRED,
    umeb: bool = False,
) -> List[FamilyParams]:
    """Every admissible parameter set at (d, d', k)."""
    check_dimensions(d, dprime, k, umeb=umeb)
    found: List[FamilyParams] = []

    def add(family: Family, **kwargs) -> None:
        found.append(FamilyParams(family, d, dprime, k, umeb=umeb, **kwargs))

    r_d, r_dp = d % k, dprime % k
    if r_dp:
        add(Family.PROP1)
        if not umeb:
            for q in q_range(Family.PROP2, d, dprime, k, convention):
                add(Family.PROP2, q=q, convention=convention)
    elif r_d and not umeb:
        add(Family.PROP3)
        for q in q_range(Family.PROP4, d, dprime, k, convention):
            add(Family.PROP4, q=q, convention=convention)
    elif not umeb:
        for q in q_range(Family.PROP5, d, dprime, k):
            add(Family.PROP5, q=q)
        for q in q_range(Family.PROP6, d, dprime, k):
            add(Family.PROP6, q=q)
    if r_d == 0:
        for m in allowed_m_values(d, dprime, k):
            add(Family.EQ8, m_offset=m)
    return found
