"""Set families over [n] stored as integer bit masks, plus the .fam/.bits text formats."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import FormatError, NotUniform


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> tuple[int, ...]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


@dataclass(frozen=True)
class SetFamily:
    """An ordered list of subsets of ``{0, ..., n-1}``.

    Duplicate members are allowed here; predicates that need distinct members
    raise :class:`~cancel_codes.errors.DuplicateMembers` instead of deduplicating.
    """

    n: int
    members: tuple[int, ...] = ()
    uniform_r: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        limit = 1 << self.n
        for m in self.members:
            if not 0 <= m < limit:
                raise ValueError(f"member {vertices_of(m)} is not a subset of [{self.n}]")
        if self.uniform_r is not None and any(m.bit_count() != self.uniform_r for m in self.members):
            raise NotUniform(f"family declared {self.uniform_r}-uniform has a member of another size")

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]], uniform_r: int | None = None) -> SetFamily:
        return cls(n, tuple(mask_of(s) for s in sets), uniform_r)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def sets(self) -> list[tuple[int, ...]]:
        return [vertices_of(m) for m in self.members]

    def subfamily(self, indices: Iterable[int]) -> SetFamily:
        return SetFamily(self.n, tuple(self.members[i] for i in indices), self.uniform_r)

    @property
    def sizes(self) -> set[int]:
        return {m.bit_count() for m in self.members}

    def uniformity(self) -> int | None:
        """The common member size, or None for an empty or non-uniform family."""
        s = self.sizes
        return next(iter(s)) if len(s) == 1 else None

    def degree(self, v: int) -> int:
        bit = 1 << v
        return sum(1 for m in self.members if m & bit)

    def has_duplicates(self) -> bool:
        return len(set(self.members)) != len(self.members)


@dataclass(frozen=True)
class Witness:
    """Certificate that a family violates a property.

    ``indices`` are positions of the offending members in the family;
    ``detail`` holds the coinciding unions or covering sets as vertex tuples.
    """

    kind: str
    indices: tuple[int, ...]
    detail: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def describe(self, family: SetFamily) -> str:
        lines = [f"violation: {self.kind}"]
        for i in self.indices:
            lines.append(f"  member[{i}] = {{{', '.join(map(str, vertices_of(family.members[i])))}}}")
        for key, verts in self.detail.items():
            lines.append(f"  {key} = {{{', '.join(map(str, verts))}}}")
        return "\n".join(lines)


class Verdict(NamedTuple):
    """Outcome of a predicate; truthy exactly when the property holds."""

    holds: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class VertexPartition:
    classes: tuple[int, ...]  # bit masks

    @classmethod
    def from_sets(cls, classes: Iterable[Iterable[int]]) -> VertexPartition:
        return cls(tuple(mask_of(c) for c in classes))

    def is_partition_of(self, n: int) -> bool:
        seen = 0
        for c in self.classes:
            if c & seen:
                return False
            seen |= c
        return seen == (1 << n) - 1

    def sets(self) -> list[tuple[int, ...]]:
        return [vertices_of(c) for c in self.classes]


# -- text formats --------------------------------------------------------------

def format_fam(family: SetFamily, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"{family.n} {len(family)}")
    lines.extend(" ".join(map(str, vertices_of(m))) for m in family.members)
    return "\n".join(lines) + "\n"


def parse_fam(text: str) -> SetFamily:
    header = None
    members: list[int] = []
    expected = 0
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r")
        if line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise FormatError("header must be 'n m'", lineno)
            header = (int(parts[0]), int(parts[1]))
            expected = header[1]
            continue
        if len(members) == expected:
            if line.strip():
                raise FormatError("more member lines than announced", lineno)
            continue
        tokens = line.split(" ") if line else []
        if any(not t.isdigit() for t in tokens):
            raise FormatError(f"malformed member line {line!r}", lineno)
        verts = [int(t) for t in tokens]
        if any(b <= a for a, b in zip(verts, verts[1:])):
            raise FormatError("vertex indices must be strictly increasing", lineno)
        if verts and verts[-1] >= header[0]:
            raise FormatError(f"vertex {verts[-1]} outside [0, {header[0]})", lineno)
        members.append(mask_of(verts))
    if header is None:
        raise FormatError("missing 'n m' header", len(lines) + 1)
    if len(members) != expected:
        raise FormatError(f"truncated file: {len(members)} of {expected} members", len(lines) + 1)
    return SetFamily(header[0], tuple(members))


def format_bits(family: SetFamily) -> str:
    lines = [f"# n={family.n}"]
    for m in family.members:
        lines.append("".join("1" if m >> v & 1 else "0" for v in range(family.n)))
    return "\n".join(lines) + "\n"


def parse_bits(text: str) -> SetFamily:
    n = None
    members = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            if line[1:].strip().startswith("n=") and n is None and not members:
                try:
                    n = int(line[1:].strip()[2:])
                except ValueError:
                    raise FormatError("bad '# n=' comment", lineno) from None
            continue
        if not line:
            # only a zero-width row is legitimately empty
            if n == 0:
                members.append(0)
            continue
        if set(line) - {"0", "1"}:
            raise FormatError("bit rows may contain only '0' and '1'", lineno)
        if n is None:
            n = len(line)
        if len(line) != n:
            raise FormatError(f"row has {len(line)} columns, expected {n}", lineno)
        members.append(mask_of(i for i, ch in enumerate(line) if ch == "1"))
    if n is None:
        raise FormatError("empty .bits file without '# n=' header", 1)
    return SetFamily(n, tuple(members))


def read_family(path: str | Path) -> SetFamily:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".bits":
        return parse_bits(text)
    return parse_fam(text)


def write_family(family: SetFamily, path: str | Path, comments: Sequence[str] = ()) -> None:
    path = Path(path)
    text = format_bits(family) if path.suffix == ".bits" else format_fam(family, comments)
    path.write_text(text)
