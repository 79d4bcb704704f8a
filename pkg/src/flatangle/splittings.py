"""Euler-characteristic ledgers of generalized Heegaard splittings.

A ledger lists blocks C_1..C_m.  Block C_i is a union of compression bodies
recorded by the Euler characteristic of its positive boundary and the list of
its negative boundary components, each tagged ``int`` (an even surface shared
with a neighbouring block) or ``ext`` (a component of the manifold boundary).
Odd surfaces are F_{2i-1} = pos(C_{2i-1}) = pos(C_{2i}); even surfaces are
F_{2i} = int(C_{2i}) = int(C_{2i+1}).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    BadIndex,
    GenusTooSmall,
    IllFormedLedger,
    InterfaceMismatch,
    InvalidBlock,
    MalformedInput,
    OddBlockCount,
    SphereComponent,
)

INT, EXT = "int", "ext"


@dataclass(frozen=True)
class Block:
    neg: tuple[tuple[int, str], ...]
    pos: int

    @property
    def chi_neg(self) -> int:
        return sum(chi for chi, _ in self.neg)

    def interface(self) -> tuple[int, ...]:
        return tuple(sorted(chi for chi, where in self.neg if where == INT))

    def exterior(self) -> tuple[int, ...]:
        return tuple(sorted(chi for chi, where in self.neg if where == EXT))

    @property
    def handles(self) -> int:
        return (self.chi_neg - self.pos) // 2

    @staticmethod
    def make(neg: Iterable[tuple[int, str]], pos: int) -> "Block":
        return Block(tuple(sorted((int(c), w) for c, w in neg)), int(pos))


@dataclass(frozen=True)
class SplittingLedger:
    blocks: tuple[Block, ...]

    @property
    def m(self) -> int:
        return len(self.blocks)

    def quantity(self) -> int:
        """Sum over blocks of (chi(neg) - chi(pos)) / 2."""
        return sum(b.handles for b in self.blocks)

    def heegaard_chis(self) -> list[int]:
        return [self.blocks[i].pos for i in range(0, self.m, 2)]

    def even_chis(self) -> list[tuple[int, ...]]:
        return [self.blocks[i].interface() for i in range(1, self.m - 1, 2)]


def _check_block(i: int, b: Block, require_nonproduct: bool) -> None:
    for chi, where in b.neg:
        if where not in (INT, EXT):
            raise InvalidBlock(f"C{i}: unknown location {where!r}")
        if chi == 2:
            raise SphereComponent(f"C{i}: negative boundary lists a sphere")
        if chi % 2 or chi > 0:
            raise InvalidBlock(f"C{i}: negative boundary entry {chi} is not the Euler characteristic of a closed orientable non-sphere surface")
    if b.pos % 2 or b.pos > 2:
        raise InvalidBlock(f"C{i}: positive boundary {b.pos} is not 2 - 2g")
    if b.chi_neg < b.pos:
        raise InvalidBlock(f"C{i}: negative handle count ({b.chi_neg} - {b.pos}) / 2")
    if require_nonproduct and b.handles < 1:
        raise InvalidBlock(f"C{i}: product block (no 1-handles)")


def make_ledger(blocks: Sequence[Block], require_nonproduct: bool = False) -> SplittingLedger:
    if not blocks:
        raise MalformedInput("ledger has no blocks")
    blocks = tuple(blocks)
    if len(blocks) % 2:
        raise OddBlockCount(f"ledger has {len(blocks)} blocks; a splitting alternates in pairs")
    for i, b in enumerate(blocks, 1):
        _check_block(i, b, require_nonproduct)
    m = len(blocks)
    for i in range(0, m, 2):
        if blocks[i].pos != blocks[i + 1].pos:
            raise InterfaceMismatch(f"chi(pos C{i + 1}) = {blocks[i].pos} but chi(pos C{i + 2}) = {blocks[i + 1].pos}")
    for i, end in ((0, 1), (m - 1, m)):
        if blocks[i].interface():
            raise InterfaceMismatch(f"C{end}: outermost block has interior negative boundary")
    for i in range(1, m - 1, 2):
        left, right = blocks[i].interface(), blocks[i + 1].interface()
        if left != right:
            raise InterfaceMismatch(f"even surface between C{i + 1} and C{i + 2}: {list(left)} vs {list(right)}")
    return SplittingLedger(blocks)


def amalgamated_genus(ledger: SplittingLedger) -> int:
    """Genus 1 + q/2 of the amalgamated Heegaard surface, q = ``ledger.quantity()``.

    Exterior entries are included in q, which gives the genus exactly when
    every boundary component is a torus.
    """
    q = Fraction(ledger.quantity())
    g = 1 + q / 2
    if g.denominator != 1 or g < 0:
        raise IllFormedLedger(f"quantity {q} gives genus {g}")
    return int(g)


def partial_amalgamate(ledger: SplittingLedger, even_index: int) -> SplittingLedger:
    """Amalgamate across the even surface F_{even_index}.

    Blocks C_{2i-1}..C_{2i+2} become two blocks whose positive boundary is
    chi(F_{2i-1}) + chi(F_{2i+1}) - chi(F_{2i}); exterior entries of C_{2i+1}
    join the C_{2i-1} side and those of C_{2i} the C_{2i+2} side.
    """
    m = ledger.m
    if even_index % 2 or not 2 <= even_index <= m - 2:
        raise BadIndex(f"no even surface F{even_index} in a ledger with {m} blocks")
    i = even_index // 2
    c1, c2, c3, c4 = ledger.blocks[2 * i - 2: 2 * i + 2]
    even = sum(c2.interface())
    h2 = (even - c2.pos) // 2
    h3 = (even - c3.pos) // 2
    chi_new = even - 2 * (h2 + h3)
    d1 = Block.make(list(c1.neg) + [(x, EXT) for x in c3.exterior()], chi_new)
    d2 = Block.make(list(c4.neg) + [(x, EXT) for x in c2.exterior()], chi_new)
    blocks = ledger.blocks[: 2 * i - 2] + (d1, d2) + ledger.blocks[2 * i + 2:]
    return make_ledger(blocks)


def full_amalgamation(ledger: SplittingLedger, order: Sequence[int]) -> SplittingLedger:
    """Apply partial amalgamations at the given even indices, in turn."""
    for k in order:
        ledger = partial_amalgamate(ledger, k)
    return ledger


def amalgamation_orders(m: int) -> list[tuple[int, ...]]:
    """Every sequence of even indices that reduces an m-block ledger to two blocks."""
    if m <= 2:
        return [()]
    out = []
    for k in range(2, m - 1, 2):
        out += [(k,) + rest for rest in amalgamation_orders(m - 2)]
    return out


def genus_bounds(n: int) -> tuple[int, int]:
    """(max blocks, max genus of the union of even and odd surfaces) for a genus n splitting."""
    if n < 2:
        raise GenusTooSmall("bounds need Heegaard genus at least 2")
    return 2 * n - 2, n * (2 * n - 3)


def satisfies_block_bound(ledger: SplittingLedger) -> bool:
    """m <= -chi(F) for the amalgamated surface F."""
    return ledger.m <= 2 * amalgamated_genus(ledger) - 2


def handlebody_ledger(g: int) -> SplittingLedger:
    return make_ledger([Block.make([], 2 - 2 * g), Block.make([], 2 - 2 * g)])


# ------------------------------------------------------------------ text format

_LINE = re.compile(r"^C(\d+)\s*:\s*neg=\[([^\]]*)\]\s+pos=(-?\d+)\s*$")
_ENTRY = re.compile(r"^(-?\d+)@(int|ext)$")


def parse_ledger(text: str) -> list[Block]:
    blocks: list[Block] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        mt = _LINE.match(line)
        if not mt:
            raise MalformedInput(f"line {lineno}: expected 'C<i>: neg=[...] pos=<chi>'")
        if int(mt.group(1)) != len(blocks) + 1:
            raise MalformedInput(f"line {lineno}: block C{mt.group(1)} out of order")
        neg = []
        for item in filter(None, (s.strip() for s in mt.group(2).split(","))):
            me = _ENTRY.match(item)
            if not me:
                raise MalformedInput(f"line {lineno}: bad entry {item!r}")
            neg.append((int(me.group(1)), me.group(2)))
        blocks.append(Block.make(neg, int(mt.group(3))))
    return blocks


def format_ledger(ledger: SplittingLedger | Sequence[Block]) -> str:
    blocks = ledger.blocks if isinstance(ledger, SplittingLedger) else ledger
    lines = []
    for i, b in enumerate(blocks, 1):
        neg = ",".join(f"{chi}@{w}" for chi, w in b.neg)
        lines.append(f"C{i}: neg=[{neg}] pos={b.pos}")
    return "\n".join(lines) + "\n"


def canonical(ledger: SplittingLedger) -> tuple:
    return tuple((b.neg, b.pos) for b in ledger.blocks)


def order_independent(ledger: SplittingLedger) -> bool:
    finals = {canonical(full_amalgamation(ledger, o)) for o in amalgamation_orders(ledger.m)}
    return len(finals) == 1



def random_ledger(rng, max_m: int = 8, max_genus: int = 3, ext_choices: Sequence[int] = (0, 0, -2)) -> SplittingLedger:
    """A random valid ledger with an even number of blocks up to ``max_m``."""
    k = rng.randint(1, max_m // 2)
    evens = [[-2 * rng.randint(0, max_genus - 1) for _ in range(rng.randint(1, 2))] for _ in range(k - 1)]
    ext = [[rng.choice(ext_choices) for _ in range(rng.randint(0, 1))] for _ in range(2 * k)]
    negs = []
    for j in range(2 * k):
        left = evens[(j - 1) // 2] if j % 2 == 0 and j > 0 else []
        right = evens[j // 2] if j % 2 == 1 and j < 2 * k - 1 else []
        negs.append([(x, INT) for x in left + right] + [(x, EXT) for x in ext[j]])
    blocks = []
    for i in range(k):
        a, b = negs[2 * i], negs[2 * i + 1]
        top = min(2, sum(c for c, _ in a), sum(c for c, _ in b))
        pos = top - 2 * rng.randint(0 if top < 2 else 1, 2)
        blocks += [Block.make(a, pos), Block.make(b, pos)]
    return make_ledger(blocks)
