"""Combinatorial maps on closed oriented surfaces, encoded by face boundary words.

A face boundary word is a sequence of oriented edge symbols (label, sign).
A collection of words describes a closed oriented surface when every oriented
symbol appears exactly once; vertices are recovered as orbits of the corner
rotation and the genus follows from Euler's formula.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

Symbol = tuple[str, int]  # (edge label, +1 or -1)
Word = tuple[Symbol, ...]


class MapError(ValueError):
    """Raised for inputs that do not describe a closed oriented surface."""


def inverse_symbol(sym: Symbol) -> Symbol:
    return (sym[0], -sym[1])


def word(*symbols: str) -> Word:
    """Convenience constructor: word("a", "b", "a^-1") -> ((a,+1),(b,+1),(a,-1))."""
    return tuple(parse_symbol(s) for s in symbols)


_SYMBOL_RE = re.compile(r"^([A-Za-z0-9_]+)(\^-1)?$")


def parse_symbol(token: str) -> Symbol:
    m = _SYMBOL_RE.match(token)
    if not m:
        raise MapError(f"cannot parse edge symbol {token!r} (expected label or label^-1)")
    return (m.group(1), -1 if m.group(2) else 1)


def format_symbol(sym: Symbol) -> str:
    return sym[0] if sym[1] == 1 else f"{sym[0]}^-1"


class CombinatorialMap:
    """Immutable map built from face boundary words."""

    def __init__(self, face_boundaries: Iterable[Sequence[Symbol]]):
        faces: list[Word] = [tuple((str(l), int(s)) for l, s in f) for f in face_boundaries]
        seen: dict[Symbol, int] = {}
        for fi, face in enumerate(faces):
            for sym in face:
                if sym[1] not in (1, -1):
                    raise MapError(f"symbol {sym} has sign {sym[1]}, expected +1/-1")
                if sym in seen:
                    raise MapError(
                        f"oriented edge {format_symbol(sym)!r} used twice "
                        f"(faces {seen[sym]} and {fi})"
                    )
                seen[sym] = fi
        labels = sorted({sym[0] for sym in seen})
        for lab in labels:
            for sign in (1, -1):
                if (lab, sign) not in seen:
                    raise MapError(
                        f"edge {lab!r} appears only with one orientation; "
                        f"missing {format_symbol((lab, sign))!r}"
                    )
        if not labels:
            raise MapError("a map needs at least one edge")

        self.faces: tuple[Word, ...] = tuple(faces)
        self.edge_labels: tuple[str, ...] = tuple(labels)
        self._face_of: dict[Symbol, int] = seen

        # next dart along its face, cyclically
        nxt: dict[Symbol, Symbol] = {}
        for face in faces:
            if not face:
                raise MapError("empty face boundary word")
            for i, sym in enumerate(face):
                nxt[sym] = face[(i + 1) % len(face)]
        self._next_in_face = nxt

        # vertices = orbits of dart -> next_in_face(dart^{-1}); the orbit of a
        # dart collects the darts leaving the same vertex
        vertex_of: dict[Symbol, int] = {}
        v = 0
        for start in sorted(nxt):
            if start in vertex_of:
                continue
            d = start
            while d not in vertex_of:
                vertex_of[d] = v
                d = nxt[inverse_symbol(d)]
            v += 1
        self._vertex_of = vertex_of
        self.vertex_count = v
        self.edge_count = len(labels)
        self.face_count = len(faces)

        self._check_connected()
        chi = self.vertex_count - self.edge_count + self.face_count
        if chi % 2 != 0 or chi > 2:
            raise MapError(f"Euler characteristic {chi} is not 2-2g for g >= 0")
        self.genus = (2 - chi) // 2

    def _check_connected(self):
        darts = set(self._next_in_face)
        start = next(iter(sorted(darts)))
        seen = {start}
        stack = [start]
        while stack:
            d = stack.pop()
            for e in (self._next_in_face[d], inverse_symbol(d)):
                if e not in seen:
                    seen.add(e)
                    stack.append(e)
        if len(seen) != len(darts):
            raise MapError("map is not connected; genus is ill-defined")

    @property
    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    def face_of(self, sym: Symbol) -> int:
        return self._face_of[sym]

    def vertex_at_tail(self, sym: Symbol) -> int:
        return self._vertex_of[sym]

    def edge_endpoints(self, label: str) -> tuple[int, int]:
        """(tail vertex, head vertex) of the positively oriented edge."""
        return self._vertex_of[(label, 1)], self._vertex_of[(label, -1)]

    def is_closed_loop(self, w: Word) -> bool:
        """Consecutive symbols head-to-tail, and last head = first tail."""
        if not w:
            return True
        for sym in w:
            if sym not in self._vertex_of:
                return False
        for i, sym in enumerate(w):
            head = self._vertex_of[inverse_symbol(sym)]
            tail_next = self._vertex_of[w[(i + 1) % len(w)]]
            if head != tail_next:
                return False
        return True

    def __repr__(self) -> str:
        return (
            f"CombinatorialMap(V={self.vertex_count}, E={self.edge_count}, "
            f"F={self.face_count}, genus={self.genus})"
        )


def build_map(face_boundaries: Iterable[Sequence[Symbol]]) -> CombinatorialMap:
    return CombinatorialMap(face_boundaries)


def fundamental_map(g: int) -> CombinatorialMap:
    """One-vertex one-face map of genus g with boundary [a1,b1]...[ag,bg]."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    boundary: list[Symbol] = []
    for i in range(1, g + 1):
        a, b = f"a{i}", f"b{i}"
        boundary += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return CombinatorialMap([boundary])


def remove_edge(m: CombinatorialMap, label: str) -> CombinatorialMap:
    """Merge the two faces on either side of the edge; genus is unchanged.

    With boundaries f1 = e.alpha and f2 = beta.e^{-1}, the merged face is
    beta.alpha.
    """
    if label not in m.edge_labels:
        raise MapError(f"no edge {label!r} in map")
    if m.edge_count == 1:
        raise MapError("cannot remove the only edge")
    f1 = m.face_of((label, 1))
    f2 = m.face_of((label, -1))
    if f1 == f2:
        raise MapError(f"edge {label!r} borders a single face; removal not allowed")
    w1 = list(m.faces[f1])
    w2 = list(m.faces[f2])
    i1 = w1.index((label, 1))
    alpha = w1[i1 + 1 :] + w1[:i1]
    i2 = w2.index((label, -1))
    beta = w2[i2 + 1 :] + w2[:i2]
    merged = tuple(beta + alpha)
    new_faces = [f for i, f in enumerate(m.faces) if i not in (f1, f2)]
    new_faces.append(merged)
    return CombinatorialMap(new_faces)


def reduce_word(w: Sequence[Symbol], cyclic: bool = True) -> Word:
    """Free reduction: delete adjacent inverse pairs until none remain.

    With cyclic=True the first/last pair is also reduced (basepoint-free form,
    appropriate for conjugation-invariant observables); the result is the
    unique reduced representative and the operation is idempotent.
    """
    stack: list[Symbol] = []
    for sym in w:
        if stack and stack[-1] == inverse_symbol(sym):
            stack.pop()
        else:
            stack.append(sym)
    if cyclic:
        while len(stack) >= 2 and stack[0] == inverse_symbol(stack[-1]):
            stack.pop()
            stack.pop(0)
    return tuple(stack)


def holonomy(w: Sequence[Symbol], assignment: dict[str, object], identity=None):
    """Ordered product of assigned group elements along the word.

    assignment maps edge labels to group elements supporting * and
    .inverse(); a symbol with sign -1 contributes the inverse element.  The
    empty word returns `identity`.
    """
    if not w:
        if identity is None:
            raise ValueError("empty word needs an explicit identity element")
        return identity
    result = None
    for label, sign in w:
        if label not in assignment:
            raise KeyError(f"no group element assigned to edge {label!r}")
        g = assignment[label]
        if sign == -1:
            g = g.inverse()
        result = g if result is None else result * g
    return result


def gauge_transform(
    m: CombinatorialMap, assignment: dict[str, object], gauge: dict[int, object]
) -> dict[str, object]:
    """Relabel edge elements by vertex elements: g_e -> j(tail)^-1 g_e j(head).

    This pairing makes left-to-right holonomies of loops based at v transform
    by conjugation with j(v), and commutes with edge inversion.
    """
    out = {}
    for label in m.edge_labels:
        tail, head = m.edge_endpoints(label)
        out[label] = gauge[tail].inverse() * assignment[label] * gauge[head]
    return out


def parse_map_text(text: str) -> CombinatorialMap:
    """Parse the one-face-per-line format: whitespace-separated signed labels.

    Blank lines and lines starting with '#' are skipped.  Errors carry the
    offending line number.
    """
    faces = []
    used: dict[Symbol, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        face = []
        for token in stripped.split():
            try:
                sym = parse_symbol(token)
            except MapError as exc:
                raise MapError(f"line {lineno}: {exc}") from None
            if sym in used:
                raise MapError(
                    f"line {lineno}: oriented edge {format_symbol(sym)!r} "
                    f"already used on line {used[sym]}"
                )
            used[sym] = lineno
            face.append(sym)
        faces.append(face)
    if not faces:
        raise MapError("no faces found")
    try:
        return CombinatorialMap(faces)
    except MapError as exc:
        raise MapError(str(exc)) from None


def load_map(path: str) -> CombinatorialMap:
    with open(path, encoding="utf-8") as fh:
        return parse_map_text(fh.read())
