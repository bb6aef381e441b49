"""Brute-force ground truth: exhaustive summation over all spin configurations.

Everything here evaluates the thermal root-spin expectation directly from
the Hamiltonian with plus boundary,

    H(sigma) = - sum_{edges} sigma_x sigma_y - sum_{leaf x} d * sigma_x,

by enumerating all 2^|V| configurations of a small finite tree.  With a
rational t = e^{2*beta} every Boltzmann weight e^{-beta*H} is an integer
power of sqrt(t); all configuration energies share one parity, so after
factoring out a common power the sums are exact rationals.

This module is the independent check on the ratio recursion; it is never
used for large heights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import workprec

from .errors import DomainError, ModeError, SizeGuardError
from .numerics import DEFAULT_PRECISION_BITS, SqrtPower, validate_precision
from .params import ModelParams

# 2^25 configurations keeps a full enumeration within desktop patience.
MAX_ENUM_VERTICES = 25


@dataclass(frozen=True)
class FiniteTree:
    """Rooted tree of height n with breadth-first vertex indexing (root = 0).

    `edges` are (parent, child) pairs inside the volume; `boundary` lists
    the leaf-generation vertices with the number of fixed boundary
    children each one has (always d).  With regular=True the root gets
    d+1 children, matching the unrooted (d+1)-regular tree.
    """

    d: int
    height: int
    generation: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    boundary: tuple[tuple[int, int], ...]
    regular: bool = False

    @property
    def n_vertices(self) -> int:
        return len(self.generation)


class SpinConfig:
    """Assignment of +/-1 spins to every vertex, densely indexed."""

    __slots__ = ("spins",)

    def __init__(self, spins):
        spins = tuple(int(s) for s in spins)
        if any(s not in (-1, 1) for s in spins):
            raise DomainError("spins must be +1 or -1")
        self.spins = spins

    @classmethod
    def from_index(cls, bits: int, size: int) -> "SpinConfig":
        return cls(1 if (bits >> i) & 1 else -1 for i in range(size))

    def flipped(self) -> "SpinConfig":
        return SpinConfig(-s for s in self.spins)

    def __len__(self):
        return len(self.spins)

    def __getitem__(self, i):
        return self.spins[i]


def build_tree(d: int, n: int, regular: bool = False) -> FiniteTree:
    """Height-n tree with every vertex having d children (root d+1 if regular)."""
    if not isinstance(d, int) or d < 2:
        raise DomainError(f"branching number d must be an integer >= 2, got {d!r}")
    if n < 1:
        raise DomainError("height must be >= 1")
    root_children = d + 1 if regular else d
    count = 1
    width = root_children
    for _ in range(n):
        count += width
        width *= d
    if count > MAX_ENUM_VERTICES:
        raise SizeGuardError(
            f"enumeration needs 2^{count} configurations; the guard allows at most "
            f"2^{MAX_ENUM_VERTICES} (d={d}, n={n}{', regular' if regular else ''})"
        )
    generation = [0]
    edges: list[tuple[int, int]] = []
    previous = [0]
    for gen in range(1, n + 1):
        current = []
        for parent in previous:
            kids = root_children if parent == 0 and gen == 1 else d
            for _ in range(kids):
                child = len(generation)
                generation.append(gen)
                edges.append((parent, child))
                current.append(child)
        previous = current
    boundary = tuple((leaf, d) for leaf in previous)
    return FiniteTree(
        d=d,
        height=n,
        generation=tuple(generation),
        edges=tuple(edges),
        boundary=boundary,
        regular=regular,
    )


def boundary_hamiltonian(config: SpinConfig, tree: FiniteTree, eta: int = 1) -> int:
    """Integer energy of `config` with all boundary spins fixed to `eta`."""
    if len(config) != tree.n_vertices:
        raise DomainError(
            f"configuration has {len(config)} spins, tree has {tree.n_vertices} vertices"
        )
    if eta not in (-1, 1):
        raise DomainError("boundary spin must be +1 or -1")
    s = config.spins
    energy = 0
    for a, b in tree.edges:
        energy -= s[a] * s[b]
    for leaf, kids in tree.boundary:
        energy -= kids * s[leaf] * eta
    return energy


def hamiltonian_plus(config: SpinConfig, tree: FiniteTree) -> int:
    """Energy with the plus boundary condition."""
    return boundary_hamiltonian(config, tree, eta=1)


def _energy_census(tree: FiniteTree, eta: int) -> dict[int, tuple[int, int]]:
    """Map energy -> (number of configs, sum of root spins over those configs)."""
    size = tree.n_vertices
    edges = tree.edges
    boundary = tree.boundary
    census: dict[int, list[int]] = {}
    for bits in range(1 << size):
        s = [1 if (bits >> i) & 1 else -1 for i in range(size)]
        energy = 0
        for a, b in edges:
            energy -= s[a] * s[b]
        for leaf, kids in boundary:
            energy -= kids * s[leaf] * eta
        entry = census.get(energy)
        if entry is None:
            census[energy] = [1, s[0]]
        else:
            entry[0] += 1
            entry[1] += s[0]
    return {e: (c, m) for e, (c, m) in census.items()}


def _exact_weights(census: dict[int, tuple[int, int]], t: Fraction):
    """Integer numerator/denominator sums after clearing the common sqrt(t) power.

    Returns (sum of sigma_0 * w, sum of w, highest energy), both sums as
    exact integers in a common (cancelling) normalization.
    """
    energies = sorted(census)
    e_max = energies[-1]
    if any((e_max - e) % 2 for e in energies):
        raise AssertionError("configuration energies must share one parity")
    p, q = t.numerator, t.denominator
    top = (e_max - energies[0]) // 2
    num = 0
    den = 0
    for energy, (count, root_sum) in census.items():
        k = (e_max - energy) // 2
        weight = p**k * q ** (top - k)
        num += root_sum * weight
        den += count * weight
    return num, den, e_max


def root_magnetization_bruteforce(
    d: int,
    n: int,
    params: ModelParams,
    mode: str | None = None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    eta: int = 1,
    regular: bool = False,
):
    """Thermal expectation of the root spin by full enumeration.

    Exact Fraction when t = e^{2*beta} is rational, mpf otherwise.
    """
    if params.d != d:
        raise DomainError(f"params carry d={params.d}, call asked for d={d}")
    tree = build_tree(d, n, regular=regular)
    census = _energy_census(tree, eta)
    exact = params.is_exact if mode is None else (mode == "exact")
    if exact:
        if not params.is_exact:
            raise ModeError("exact oracle needs rational t = e^(2*beta)")
        num, den, _ = _exact_weights(census, params.b_fraction)
        return Fraction(num, den)
    validate_precision(precision_bits)
    with workprec(precision_bits + 16):
        beta = params.beta_mpf(precision_bits + 16)
        num = mpmath.mpf(0)
        den = mpmath.mpf(0)
        for energy in sorted(census):
            count, root_sum = census[energy]
            weight = mpmath.exp(-beta * energy)
            num += root_sum * weight
            den += count * weight
        value = num / den
    with workprec(precision_bits):
        return +value


def partition_function(
    d: int,
    n: int,
    params: ModelParams,
    mode: str | None = None,
    precision_bits: int = DEFAULT_PRECISION_BITS,
    eta: int = 1,
    regular: bool = False,
):
    """Normalizing constant Z of the boundary Gibbs measure on the height-n volume.

    Exact mode returns a SqrtPower (the value may carry an odd power of
    sqrt(t)); float mode returns an mpf.
    """
    if params.d != d:
        raise DomainError(f"params carry d={params.d}, call asked for d={d}")
    tree = build_tree(d, n, regular=regular)
    census = _energy_census(tree, eta)
    exact = params.is_exact if mode is None else (mode == "exact")
    if exact:
        if not params.is_exact:
            raise ModeError("exact oracle needs rational t = e^(2*beta)")
        t = params.b_fraction
        energies = sorted(census)
        e_max = energies[-1]
        total = Fraction(0)
        for energy, (count, _) in census.items():
            k = (e_max - energy) // 2
            total += count * t**k
        return SqrtPower(total, -e_max, t).normalized()
    validate_precision(precision_bits)
    with workprec(precision_bits + 16):
        beta = params.beta_mpf(precision_bits + 16)
        total = mpmath.mpf(0)
        for energy in sorted(census):
            count, _ = census[energy]
            total += count * mpmath.exp(-beta * energy)
    with workprec(precision_bits):
        return +total
