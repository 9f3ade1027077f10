"""Graded strings and bands for the quiver Q_n.

Vertices of Q_n are the labels ``1..n``.  Every label carries one outgoing
``x`` arrow to ``pi1(label)`` and one outgoing ``y`` arrow to
``pi2(label)``, where ``pi1 = (12)(34)...`` and ``pi2 = (23)(45)...`` (cycles
that would leave ``1..n`` are dropped, producing loops).

A string is a labelled path ``v_0 - v_1 - ... - v_{k-1}``.  The letter
between ``v_i`` and ``v_{i+1}`` is ``R`` when ``x`` sends ``v_i`` to
``v_{i+1}`` and ``L`` when ``y`` sends ``v_{i+1}`` to ``v_i``.  Since the
relations ``xy = yx = 0`` forbid every other walk shape, each string module
has exactly one such encoding.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

R, L = "R", "L"


class InvalidDescriptor(ValueError):
    """A string, polygon or band descriptor violates its invariants."""


class LabelRangeError(InvalidDescriptor):
    """A label lies outside ``1..n``."""


class UndirectedPolygon(InvalidDescriptor):
    """All arrows of a polygon point the same way round."""


class SymmetricPolygon(InvalidDescriptor):
    """A band polygon is fixed by a proper rotation."""


class ZeroEigenvalue(InvalidDescriptor):
    """A band eigenvalue is zero."""


def pi1(n: int, i: int) -> int:
    if i % 2 == 1:
        return i + 1 if i + 1 <= n else i
    return i - 1


def pi2(n: int, i: int) -> int:
    if i == 1:
        return 1
    if i % 2 == 0:
        return i + 1 if i + 1 <= n else i
    return i - 1


def step(n: int, label: int, letter: str) -> int:
    if letter == R:
        return pi1(n, label)
    if letter == L:
        return pi2(n, label)
    raise InvalidDescriptor(f"unknown direction letter {letter!r}")


def _check_labels(n: int, labels: Sequence[int]):
    if n < 1:
        raise InvalidDescriptor("n must be positive")
    for a in labels:
        if not 1 <= a <= n:
            raise LabelRangeError(f"label {a} outside 1..{n}")


@dataclass(frozen=True, order=True)
class GradedString:
    """A string: ``len(dirs) == len(labels) - 1``."""

    n: int
    labels: tuple[int, ...]
    dirs: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(a) for a in self.labels))
        object.__setattr__(self, "dirs", tuple(self.dirs))
        if not self.labels:
            raise InvalidDescriptor("a string has at least one vertex")
        if len(self.dirs) != len(self.labels) - 1:
            raise InvalidDescriptor("need exactly one direction per edge")
        _check_labels(self.n, self.labels)
        for i, d in enumerate(self.dirs):
            if step(self.n, self.labels[i], d) != self.labels[i + 1]:
                raise InvalidDescriptor(
                    f"edge {i}: label {self.labels[i + 1]} does not follow "
                    f"{self.labels[i]} under {d}")

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def dims(self) -> tuple[int, ...]:
        c = Counter(self.labels)
        return tuple(c[a] for a in range(1, self.n + 1))

    def is_sink(self, pos: int) -> bool:
        """No arrow leaves vertex ``pos``."""
        if pos > 0 and self.dirs[pos - 1] == L:
            return False
        if pos < len(self.dirs) and self.dirs[pos] == R:
            return False
        return True

    def is_source(self, pos: int) -> bool:
        if pos > 0 and self.dirs[pos - 1] == R:
            return False
        if pos < len(self.dirs) and self.dirs[pos] == L:
            return False
        return True

    def to_text(self) -> str:
        return (f"string n={self.n} labels={','.join(map(str, self.labels))} "
                f"dirs={','.join(self.dirs)}")


@dataclass(frozen=True, order=True)
class GradedPolygon:
    """A closed walk: ``dirs[i]`` joins ``labels[i]`` and ``labels[(i+1) % k]``."""

    n: int
    labels: tuple[int, ...]
    dirs: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(a) for a in self.labels))
        object.__setattr__(self, "dirs", tuple(self.dirs))
        k = len(self.labels)
        if k < 2 or len(self.dirs) != k:
            raise InvalidDescriptor("a polygon needs k >= 2 vertices and k edges")
        _check_labels(self.n, self.labels)
        for i, d in enumerate(self.dirs):
            if step(self.n, self.labels[i], d) != self.labels[(i + 1) % k]:
                raise InvalidDescriptor(f"polygon edge {i} breaks the label rule")
        if R not in self.dirs or L not in self.dirs:
            raise UndirectedPolygon("a polygon must use both orientations")

    def __len__(self) -> int:
        return len(self.labels)

    def rotate(self, s: int) -> "GradedPolygon":
        k = len(self)
        s %= k
        return GradedPolygon(self.n, self.labels[s:] + self.labels[:s],
                             self.dirs[s:] + self.dirs[:s])

    def rotations(self) -> list["GradedPolygon"]:
        return [self.rotate(s) for s in range(len(self))]

    def canonical(self) -> "GradedPolygon":
        return min(self.rotations(), key=lambda p: (p.labels, p.dirs))

    def is_canonical(self) -> bool:
        return self == self.canonical()

    def is_primitive(self) -> bool:
        """True when no proper rotation fixes the polygon."""
        k = len(self)
        return all(self.rotate(s) != self for s in range(1, k))

    def is_sink(self, pos: int) -> bool:
        k = len(self)
        return self.dirs[(pos - 1) % k] == R and self.dirs[pos] == L

    def sinks(self) -> list[int]:
        return [i for i in range(len(self)) if self.is_sink(i)]

    @property
    def dims(self) -> tuple[int, ...]:
        c = Counter(self.labels)
        return tuple(c[a] for a in range(1, self.n + 1))

    def to_text(self) -> str:
        return (f"polygon n={self.n} labels={','.join(map(str, self.labels))} "
                f"dirs={','.join(self.dirs)}")


@dataclass(frozen=True, order=True)
class BandDescriptor:
    """A band: canonical primitive polygon, eigenvalue and Jordan block size."""

    polygon: GradedPolygon
    lam: Fraction
    r: int = 1

    def __post_init__(self):
        lam = Fraction(self.lam)
        object.__setattr__(self, "lam", lam)
        if lam == 0:
            raise ZeroEigenvalue("band eigenvalue must be nonzero")
        if self.r < 1:
            raise InvalidDescriptor("Jordan block size must be positive")
        if not self.polygon.is_primitive():
            raise SymmetricPolygon("band polygon has a rotational symmetry")
        if not self.polygon.is_canonical():
            raise InvalidDescriptor("band polygon is not in canonical rotation")

    @property
    def n(self) -> int:
        return self.polygon.n

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(self.r * d for d in self.polygon.dims)

    def to_text(self) -> str:
        p = self.polygon
        return (f"band n={p.n} labels={','.join(map(str, p.labels))} "
                f"dirs={','.join(p.dirs)} lambda={self.lam} r={self.r}")


def make_band(n: int, labels: Sequence[int], dirs: Sequence[str], lam=1, r: int = 1) -> BandDescriptor:
    """Build a band descriptor, rotating the polygon into canonical position.

    Rotation does not change the isomorphism class, so ``lam`` is kept.
    """
    poly = GradedPolygon(n, tuple(labels), tuple(dirs)).canonical()
    return BandDescriptor(poly, Fraction(lam), r)


Descriptor = GradedString | BandDescriptor


def descriptor_key(d: Descriptor) -> tuple:
    if isinstance(d, GradedString):
        return (0, d.n, len(d), d.labels, d.dirs)
    p = d.polygon
    return (1, p.n, len(p), p.labels, p.dirs, d.lam, d.r)


# ---------------------------------------------------------------- enumeration


def iter_strings(n: int, length: int) -> Iterator[GradedString]:
    """All strings with exactly ``length`` vertices, ordered by labels then dirs."""
    def rec(labels: list[int], dirs: list[str]):
        if len(labels) == length:
            yield GradedString(n, tuple(labels), tuple(dirs))
            return
        for d in (L, R):
            labels.append(step(n, labels[-1], d))
            dirs.append(d)
            yield from rec(labels, dirs)
            labels.pop()
            dirs.pop()

    for start in range(1, n + 1):
        yield from rec([start], [])


def enumerate_strings(n: int, max_len: int) -> list[GradedString]:
    if n < 1 or max_len < 0:
        raise InvalidDescriptor("need n >= 1 and max_len >= 0")
    out: list[GradedString] = []
    for k in range(1, max_len + 1):
        out.extend(sorted(iter_strings(n, k), key=lambda s: (s.labels, s.dirs)))
    return out


def enumerate_polygons(n: int, max_perimeter: int) -> list[GradedPolygon]:
    """Canonical primitive polygons with perimeter ``2..max_perimeter``."""
    if n < 1:
        raise InvalidDescriptor("n must be positive")
    out: list[GradedPolygon] = []
    for k in range(2, max_perimeter + 1):
        found = set()
        for s in iter_strings(n, k + 1):
            if s.labels[-1] != s.labels[0] or R not in s.dirs or L not in s.dirs:
                continue
            p = GradedPolygon(n, s.labels[:-1], s.dirs)
            if p.is_primitive() and p.is_canonical():
                found.add(p)
        out.extend(sorted(found, key=lambda p: (p.labels, p.dirs)))
    return out


def enumerate_bands(n: int, max_perimeter: int) -> list[GradedPolygon]:
    return enumerate_polygons(n, max_perimeter)


# --------------------------------------------------------------- operations


def validate_string(n: int, dirs: Sequence[str], labels: Sequence[int]) -> bool:
    """Label rule along a path; out-of-range labels raise ``LabelRangeError``."""
    _check_labels(n, labels)
    if len(dirs) != len(labels) - 1 or not labels:
        raise InvalidDescriptor("need exactly one direction per edge")
    return all(step(n, labels[i], d) == labels[i + 1] for i, d in enumerate(dirs))


def has_rotational_symmetry(p: GradedPolygon) -> bool:
    return not p.is_primitive()


def reverse(s: GradedString) -> GradedString:
    """The string of the dual module: labels and letters read backwards."""
    return GradedString(s.n, s.labels[::-1], s.dirs[::-1])


def concat(a: GradedString, b: GradedString) -> GradedString:
    """Join ``a`` and ``b`` by identifying the last vertex of ``a`` with the first of ``b``."""
    if a.n != b.n:
        raise InvalidDescriptor("strings over different quivers")
    if a.labels[-1] != b.labels[0]:
        raise InvalidDescriptor("endpoint labels differ")
    return GradedString(a.n, a.labels + b.labels[1:], a.dirs + b.dirs)


def unfold(p: GradedPolygon, sink: int) -> GradedString:
    """Cut the polygon open at a sink, duplicating that vertex at the far end."""
    if not p.is_sink(sink):
        raise InvalidDescriptor(f"vertex {sink} is not a sink of the polygon")
    k = len(p)
    labels = tuple(p.labels[(sink + t) % k] for t in range(k)) + (p.labels[sink],)
    dirs = tuple(p.dirs[(sink + t) % k] for t in range(k))
    return GradedString(p.n, labels, dirs)


def homogeneous_string(n: int, label: int, length: int, letter: str = R) -> GradedString:
    labels = [label]
    for _ in range(length - 1):
        labels.append(step(n, labels[-1], letter))
    return GradedString(n, tuple(labels), (letter,) * (length - 1))


# ------------------------------------------------------------- socle series


@dataclass(frozen=True)
class SocleSeries:
    """Successive socle layers, each a multiset of labels."""

    n: int
    layers: tuple[tuple[int, ...], ...] = field(default_factory=tuple)

    @classmethod
    def from_counts(cls, n: int, counts: Sequence[Sequence[int]]) -> "SocleSeries":
        layers = []
        for c in counts:
            layer = []
            for a, m in enumerate(c, start=1):
                layer.extend([a] * m)
            layers.append(tuple(layer))
        return cls(n, tuple(layers))

    def counts(self) -> list[tuple[int, ...]]:
        out = []
        for layer in self.layers:
            c = Counter(layer)
            out.append(tuple(c[a] for a in range(1, self.n + 1)))
        return out

    @property
    def dims(self) -> tuple[int, ...]:
        c = Counter(a for layer in self.layers for a in layer)
        return tuple(c[a] for a in range(1, self.n + 1))

    def scaled(self, m: int) -> "SocleSeries":
        return SocleSeries(self.n, tuple(tuple(sorted(layer * m)) for layer in self.layers))

    def divided(self, m: int) -> "SocleSeries | None":
        out = []
        for c in self.counts():
            if any(v % m for v in c):
                return None
            out.append(tuple(v // m for v in c))
        return SocleSeries.from_counts(self.n, out)

    def __len__(self) -> int:
        return len(self.layers)


def _sink_peeling(n: int, labels: Sequence[int], arrows: Sequence[tuple[int, int]], mult: int) -> SocleSeries:
    alive = set(range(len(labels)))
    edges = set(arrows)
    layers = []
    while alive:
        has_out = {a for a, b in edges}
        sinks = sorted(v for v in alive if v not in has_out)
        if not sinks:
            raise InvalidDescriptor("cyclic orientation has no sink")
        layers.append(tuple(sorted(labels[v] for v in sinks for _ in range(mult))))
        alive -= set(sinks)
        edges = {(a, b) for a, b in edges if a in alive and b in alive}
    return SocleSeries(n, tuple(layers))


def _string_arrows(dirs: Sequence[str], k: int, cyclic: bool) -> list[tuple[int, int]]:
    arrows = []
    for i, d in enumerate(dirs):
        j = (i + 1) % k if cyclic else i + 1
        arrows.append((i, j) if d == R else (j, i))
    return arrows


def predicted_socle(obj: GradedString | GradedPolygon | BandDescriptor, r: int | None = None) -> SocleSeries:
    """Socle layers read off the shape by peeling sinks repeatedly."""
    if isinstance(obj, GradedString):
        return _sink_peeling(obj.n, obj.labels, _string_arrows(obj.dirs, len(obj), False), 1)
    if isinstance(obj, BandDescriptor):
        return predicted_socle(obj.polygon, obj.r)
    k = len(obj)
    return _sink_peeling(obj.n, obj.labels, _string_arrows(obj.dirs, k, True), r or 1)


# ---------------------------------------------------------------- text form


def _parse_fields(tokens: Sequence[str]) -> dict[str, str]:
    out = {}
    for t in tokens:
        if "=" not in t:
            raise InvalidDescriptor(f"expected key=value, got {t!r}")
        k, v = t.split("=", 1)
        if k in out:
            raise InvalidDescriptor(f"duplicate field {k!r}")
        out[k] = v
    return out


def _parse_ints(v: str) -> tuple[int, ...]:
    try:
        return tuple(int(a) for a in v.split(",") if a != "")
    except ValueError as exc:
        raise InvalidDescriptor(f"bad label list {v!r}") from exc


def _parse_dirs(v: str) -> tuple[str, ...]:
    dirs = tuple(a for a in v.split(",") if a != "")
    for d in dirs:
        if d not in (R, L):
            raise InvalidDescriptor(f"bad direction {d!r}")
    return dirs


def parse_descriptor(line: str) -> GradedString | GradedPolygon | BandDescriptor:
    """Parse one descriptor line (``string ...``, ``polygon ...`` or ``band ...``)."""
    tokens = line.split()
    if not tokens:
        raise InvalidDescriptor("empty descriptor")
    kind, fields = tokens[0], _parse_fields(tokens[1:])
    allowed = {"string": {"n", "labels", "dirs"}, "polygon": {"n", "labels", "dirs"},
               "band": {"n", "labels", "dirs", "lambda", "r"}}
    if kind not in allowed:
        raise InvalidDescriptor(f"unknown descriptor kind {kind!r}")
    extra = set(fields) - allowed[kind]
    missing = {"n", "labels", "dirs"} - set(fields)
    if extra or missing:
        raise InvalidDescriptor(f"bad fields: extra={sorted(extra)} missing={sorted(missing)}")
    try:
        n = int(fields["n"])
    except ValueError as exc:
        raise InvalidDescriptor("n must be an integer") from exc
    labels = _parse_ints(fields["labels"])
    dirs = _parse_dirs(fields["dirs"])
    if kind == "string":
        return GradedString(n, labels, dirs)
    if kind == "polygon":
        return GradedPolygon(n, labels, dirs)
    try:
        lam = Fraction(fields.get("lambda", "1"))
        r = int(fields.get("r", "1"))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidDescriptor("bad lambda or r") from exc
    return BandDescriptor(GradedPolygon(n, labels, dirs), lam, r)
