"""Concrete finitely generated groups with exact, canonical element arithmetic.

Every family fixes a canonical encoding for its elements (plain ints and
int tuples), so group equality is encoding equality and elements can live
in sets and dicts.  All arithmetic is exact; Python integers never wrap.
The symmetric generating set of each family is fixed at construction:

    z, zd:<k>        standard basis vectors and their inverses (2k elements)
    cyclic:<n>       +1 and -1 (a single element when n = 2)
    dihedral:<n>     r, r^-1, s  for  <r, s | r^n, s^2, s r s = r^-1>
    free:<k>         the k free letters and their inverses
    heisenberg[:<m>] X, X^-1, Y, Y^-1 (integer or mod-m upper unitriangular)
    symmetric:<n>    adjacent transpositions (each its own inverse)

No generating set contains the identity; involutions appear once, and
Card(S) counts distinct elements.  Elements are totally ordered by
(encoding length, encoding); that order is the tie-breaker wherever
determinism matters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from math import factorial
from typing import Optional, Union

from .errors import ParseError

Element = Union[int, tuple]

_INT_RE = re.compile(r"[+-]?[0-9]+")


def _parse_int_list(text: str, open_ch: str, close_ch: str, what: str) -> list[int]:
    text = text.strip()
    if not (text.startswith(open_ch) and text.endswith(close_ch)):
        raise ParseError(f"{what}: expected {open_ch}...{close_ch}, got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        raise ParseError(f"{what}: empty coordinate list in {text!r}")
    coords = []
    for part in inner.split(","):
        part = part.strip()
        if not _INT_RE.fullmatch(part):
            raise ParseError(f"{what}: bad integer {part!r} in {text!r}")
        coords.append(int(part))
    return coords


@dataclass(frozen=True)
class GeneratingSet:
    """Ordered symmetric generating set with an explicit inverse pairing.

    inverse_pairing[i] is the index of the inverse of elements[i];
    involutions pair with themselves.
    """

    elements: tuple[Element, ...]
    inverse_pairing: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.elements)

    @classmethod
    def from_candidates(cls, group: "Group", candidates) -> "GeneratingSet":
        seen: list[Element] = []
        identity = group.identity()
        for c in candidates:
            if c == identity:
                raise ValueError("generating set must not contain the identity")
            if c not in seen:
                seen.append(c)
        if not seen:
            raise ValueError("generating set must be non-empty")
        pairing = []
        for c in seen:
            inv = group.inv(c)
            if inv not in seen:
                raise ValueError("generating set is not closed under inverses")
            pairing.append(seen.index(inv))
        return cls(tuple(seen), tuple(pairing))


class Group:
    """A group family instance: exact arithmetic on canonical encodings."""

    name: str

    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, a: Element, b: Element) -> Element:
        raise NotImplementedError

    def inv(self, a: Element) -> Element:
        raise NotImplementedError

    def order(self) -> Optional[int]:
        """Group order; None means infinite."""
        raise NotImplementedError

    def validate(self, e: Element) -> None:
        """Raise ParseError unless e is a canonical encoding for this group."""
        raise NotImplementedError

    def encoding(self, e: Element) -> tuple:
        """Canonical tuple encoding used by the documented total order."""
        return e  # tuple-encoded families

    def sort_key(self, e: Element):
        enc = self.encoding(e)
        return (len(enc), enc)

    def parse(self, text: str) -> Element:
        raise NotImplementedError

    def format(self, e: Element) -> str:
        raise NotImplementedError

    def _generator_candidates(self) -> list[Element]:
        raise NotImplementedError

    @cached_property
    def generating_set(self) -> GeneratingSet:
        return GeneratingSet.from_candidates(self, self._generator_candidates())

    @property
    def generators(self) -> tuple[Element, ...]:
        return self.generating_set.elements

    @property
    def key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other) -> bool:
        return isinstance(other, Group) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"<group {self.name}>"


class ZGroup(Group):
    """Free abelian group Z^k; elements are integer k-tuples under addition."""

    def __init__(self, rank: int):
        if rank < 1:
            raise ParseError(f"zd rank must be >= 1, got {rank}")
        self.rank = rank
        self.name = "z" if rank == 1 else f"zd:{rank}"

    @property
    def key(self):
        return ("z", self.rank)

    def identity(self):
        return (0,) * self.rank

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def order(self):
        return None

    def validate(self, e):
        if not (
            isinstance(e, tuple)
            and len(e) == self.rank
            and all(isinstance(x, int) for x in e)
        ):
            raise ParseError(f"{self.name}: need an integer {self.rank}-tuple, got {e!r}")

    def _generator_candidates(self):
        basis = []
        for i in range(self.rank):
            v = [0] * self.rank
            v[i] = 1
            basis.append(tuple(v))
        return basis + [self.inv(v) for v in basis]

    def parse(self, text):
        text = text.strip()
        if self.rank == 1 and _INT_RE.fullmatch(text):
            return (int(text),)
        coords = _parse_int_list(text, "(", ")", self.name)
        if len(coords) != self.rank:
            raise ParseError(f"{self.name}: expected {self.rank} coordinates in {text!r}")
        return tuple(coords)

    def format(self, e):
        if self.rank == 1:
            return str(e[0])
        return "(" + ",".join(str(x) for x in e) + ")"


class CyclicGroup(Group):
    """Z/nZ; elements are residues 0..n-1 under addition mod n."""

    def __init__(self, n: int):
        if n < 2:
            raise ParseError(f"cyclic order must be >= 2, got {n}")
        self.n = n
        self.name = f"cyclic:{n}"

    @property
    def key(self):
        return ("cyclic", self.n)

    def identity(self):
        return 0

    def mul(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return (-a) % self.n

    def order(self):
        return self.n

    def validate(self, e):
        if not (isinstance(e, int) and 0 <= e < self.n):
            raise ParseError(f"{self.name}: residue must lie in 0..{self.n - 1}, got {e!r}")

    def encoding(self, e):
        return (e,)

    def _generator_candidates(self):
        return [1 % self.n, (self.n - 1) % self.n]

    def parse(self, text):
        text = text.strip()
        if not _INT_RE.fullmatch(text):
            raise ParseError(f"{self.name}: bad residue {text!r}")
        value = int(text)
        self.validate(value)
        return value

    def format(self, e):
        return str(e)


class DihedralGroup(Group):
    """Dihedral group of order 2n; (i, j) encodes r^i s^j.

    The relations r^n = s^2 = e and s r s = r^-1 give
    (i, j)(i2, j2) = (i + i2 mod n, j2) when j = 0 and
    (i - i2 mod n, 1 ^ j2) when j = 1.
    """

    def __init__(self, n: int):
        if n < 3:
            raise ParseError(f"dihedral parameter must be >= 3, got {n}")
        self.n = n
        self.name = f"dihedral:{n}"

    @property
    def key(self):
        return ("dihedral", self.n)

    def identity(self):
        return (0, 0)

    def mul(self, a, b):
        i, j = a
        i2, j2 = b
        rot = i + i2 if j == 0 else i - i2
        return (rot % self.n, j ^ j2)

    def inv(self, a):
        i, j = a
        if j == 1:
            return a  # reflections are involutions
        return ((-i) % self.n, 0)

    def order(self):
        return 2 * self.n

    def validate(self, e):
        if not (
            isinstance(e, tuple)
            and len(e) == 2
            and isinstance(e[0], int)
            and isinstance(e[1], int)
            and 0 <= e[0] < self.n
            and e[1] in (0, 1)
        ):
            raise ParseError(f"{self.name}: need (i, j) with 0 <= i < {self.n}, j in {{0,1}}; got {e!r}")

    def _generator_candidates(self):
        return [(1, 0), (self.n - 1, 0), (0, 1)]

    def parse(self, text):
        coords = _parse_int_list(text, "(", ")", self.name)
        if len(coords) != 2:
            raise ParseError(f"{self.name}: expected (i,j), got {text!r}")
        e = (coords[0], coords[1])
        self.validate(e)
        return e

    def format(self, e):
        return f"({e[0]},{e[1]})"


class FreeGroup(Group):
    """Free group of given rank; elements are reduced words.

    A word is a tuple of nonzero ints: letter i in 1..rank, negative for
    its inverse, with no adjacent x, -x pair.  Letters print as a..z with
    uppercase for inverses; the identity prints as "e".  The letter
    grammar bounds the rank at 26.
    """

    def __init__(self, rank: int):
        if rank < 1:
            raise ParseError(f"free rank must be >= 1, got {rank}")
        if rank > 26:
            raise ParseError("free rank above 26 is not supported by the letter grammar")
        self.rank = rank
        self.name = f"free:{rank}"

    @property
    def key(self):
        return ("free", self.rank)

    def identity(self):
        return ()

    def mul(self, a, b):
        i = len(a)
        j = 0
        while i > 0 and j < len(b) and a[i - 1] == -b[j]:
            i -= 1
            j += 1
        return a[:i] + b[j:]

    def inv(self, a):
        return tuple(-x for x in reversed(a))

    def order(self):
        return None

    def validate(self, e):
        if not (isinstance(e, tuple) and all(isinstance(x, int) for x in e)):
            raise ParseError(f"{self.name}: need a tuple of letters, got {e!r}")
        for x in e:
            if x == 0 or abs(x) > self.rank:
                raise ParseError(f"{self.name}: letter {x} out of range 1..{self.rank}")
        for x, y in zip(e, e[1:]):
            if x == -y:
                raise ParseError(f"{self.name}: word {e!r} is not reduced")

    def _generator_candidates(self):
        letters = [(i,) for i in range(1, self.rank + 1)]
        return letters + [(-i,) for i in range(1, self.rank + 1)]

    def parse(self, text):
        text = text.strip()
        if text == "e":
            return ()
        word: tuple = ()
        for ch in text:
            if "a" <= ch <= "z":
                letter = ord(ch) - ord("a") + 1
            elif "A" <= ch <= "Z":
                letter = -(ord(ch) - ord("A") + 1)
            else:
                raise ParseError(f"{self.name}: bad character {ch!r} in word {text!r}")
            if abs(letter) > self.rank:
                raise ParseError(f"{self.name}: letter {ch!r} exceeds rank {self.rank}")
            word = self.mul(word, (letter,))  # reduce as we go
        return word

    def format(self, e):
        if not e:
            return "e"
        out = []
        for x in e:
            out.append(chr(ord("a") + x - 1) if x > 0 else chr(ord("A") - x - 1))
        return "".join(out)


class HeisenbergGroup(Group):
    """Discrete Heisenberg group, integer or mod-m upper unitriangular.

    (a, b, c) encodes the matrix [[1, a, c], [0, 1, b], [0, 0, 1]], so
    (a, b, c)(a2, b2, c2) = (a + a2, b + b2, c + c2 + a*b2), with every
    coordinate reduced mod m in the modular variant.
    """

    def __init__(self, modulus: Optional[int] = None):
        if modulus is not None and modulus < 2:
            raise ParseError(f"heisenberg modulus must be >= 2, got {modulus}")
        self.modulus = modulus
        self.name = "heisenberg" if modulus is None else f"heisenberg:{modulus}"

    @property
    def key(self):
        return ("heisenberg", self.modulus)

    def identity(self):
        return (0, 0, 0)

    def _reduce(self, a, b, c):
        m = self.modulus
        if m is None:
            return (a, b, c)
        return (a % m, b % m, c % m)

    def mul(self, x, y):
        a, b, c = x
        a2, b2, c2 = y
        return self._reduce(a + a2, b + b2, c + c2 + a * b2)

    def inv(self, x):
        a, b, c = x
        return self._reduce(-a, -b, a * b - c)

    def order(self):
        return None if self.modulus is None else self.modulus**3

    def validate(self, e):
        if not (isinstance(e, tuple) and len(e) == 3 and all(isinstance(x, int) for x in e)):
            raise ParseError(f"{self.name}: need an integer 3-tuple, got {e!r}")
        if self.modulus is not None and not all(0 <= x < self.modulus for x in e):
            raise ParseError(f"{self.name}: coordinates must lie in 0..{self.modulus - 1}, got {e!r}")

    def _generator_candidates(self):
        x = self._reduce(1, 0, 0)
        y = self._reduce(0, 1, 0)
        return [x, self.inv(x), y, self.inv(y)]

    def parse(self, text):
        coords = _parse_int_list(text, "(", ")", self.name)
        if len(coords) != 3:
            raise ParseError(f"{self.name}: expected (a,b,c), got {text!r}")
        e = tuple(coords)
        self.validate(e)
        return e

    def format(self, e):
        return "(" + ",".join(str(x) for x in e) + ")"


class SymmetricGroup(Group):
    """Symmetric group on n letters; elements are one-line image tuples.

    e[i] is the image of i+1 (values 1..n); composition applies the right
    factor first: (a * b)(x) = a(b(x)).
    """

    def __init__(self, n: int):
        if n < 3:
            raise ParseError(f"symmetric parameter must be >= 3, got {n}")
        self.n = n
        self.name = f"symmetric:{n}"

    @property
    def key(self):
        return ("symmetric", self.n)

    def identity(self):
        return tuple(range(1, self.n + 1))

    def mul(self, a, b):
        return tuple(a[b[i] - 1] for i in range(self.n))

    def inv(self, a):
        out = [0] * self.n
        for i, image in enumerate(a):
            out[image - 1] = i + 1
        return tuple(out)

    def order(self):
        return factorial(self.n)

    def validate(self, e):
        if not (isinstance(e, tuple) and len(e) == self.n and all(isinstance(x, int) for x in e)):
            raise ParseError(f"{self.name}: need an image {self.n}-tuple, got {e!r}")
        if sorted(e) != list(range(1, self.n + 1)):
            raise ParseError(f"{self.name}: {e!r} is not a permutation of 1..{self.n}")

    def _generator_candidates(self):
        gens = []
        for i in range(self.n - 1):
            images = list(range(1, self.n + 1))
            images[i], images[i + 1] = images[i + 1], images[i]
            gens.append(tuple(images))
        return gens

    def parse(self, text):
        coords = _parse_int_list(text, "[", "]", self.name)
        e = tuple(coords)
        self.validate(e)
        return e

    def format(self, e):
        return "[" + ",".join(str(x) for x in e) + "]"


_GROUP_RE = re.compile(r"(zd|cyclic|dihedral|free|heisenberg|symmetric):([0-9]+)")


def parse_group(text: str) -> Group:
    """Build a group from its spec string (z, zd:<k>, cyclic:<n>, dihedral:<n>,
    free:<k>, heisenberg, heisenberg:<m>, symmetric:<n>)."""
    t = text.strip()
    if t == "z":
        return ZGroup(1)
    if t == "heisenberg":
        return HeisenbergGroup(None)
    m = _GROUP_RE.fullmatch(t)
    if m is None:
        raise ParseError(f"unrecognized group spec {text!r}")
    family, value = m.group(1), int(m.group(2))
    if family == "zd":
        return ZGroup(value)
    if family == "cyclic":
        return CyclicGroup(value)
    if family == "dihedral":
        return DihedralGroup(value)
    if family == "free":
        return FreeGroup(value)
    if family == "heisenberg":
        return HeisenbergGroup(value)
    return SymmetricGroup(value)


# Spec-style functional surface over the method API.

def identity(spec: Group) -> Element:
    return spec.identity()


def multiply(spec: Group, a: Element, b: Element) -> Element:
    return spec.mul(a, b)


def inverse(spec: Group, a: Element) -> Element:
    return spec.inv(a)


def group_order(spec: Group) -> Optional[int]:
    return spec.order()


def parse_element(spec: Group, text: str) -> Element:
    return spec.parse(text)


def format_element(spec: Group, e: Element) -> str:
    return spec.format(e)
