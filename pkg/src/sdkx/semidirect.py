"""Generic key exchange over an extension of a semigroup by a cyclic group of endomorphisms.

A platform supplies the semigroup multiplication and the action of powers of
one public endomorphism ``phi``.  Pairs ``(g, phi**r)`` multiply as::

    (g, phi**r) * (h, phi**s) = (phi**s(g) * h, phi**(r + s))

Each party raises the public pair ``(g, phi)`` to a private power and sends
only the first component.  The second component of a received transmission
is never needed, so it is never reconstructed.
"""

from __future__ import annotations

import abc
import enum
from dataclasses import dataclass, field
from typing import Any, Callable


class Endomorphism(abc.ABC):
    """A platform semigroup ``G`` together with a public endomorphism ``phi``."""

    @abc.abstractmethod
    def mul(self, x: Any, y: Any) -> Any:
        """Semigroup product ``x * y`` in ``G``."""

    @abc.abstractmethod
    def apply(self, s: int, x: Any) -> Any:
        """``phi**s(x)`` for ``s >= 0``."""

    def eq(self, x: Any, y: Any) -> bool:
        return x == y


@dataclass(frozen=True)
class SdElement:
    """The pair ``(first, phi**exp)``; ``exp == 0`` is the identity map."""

    first: Any
    exp: int

    def __post_init__(self):
        if self.exp < 0:
            raise ValueError("endomorphism exponent must be non-negative")


class MulCounter:
    """Counts ``sd_mul`` invocations made on its behalf."""

    def __init__(self):
        self.count = 0

    def __call__(self):
        self.count += 1


def sd_mul(u: SdElement, v: SdElement, phi: Endomorphism) -> SdElement:
    return SdElement(phi.mul(phi.apply(v.exp, u.first), v.first), u.exp + v.exp)


def sd_pow(g: Any, phi: Endomorphism, n: int, counter: Callable[[], None] | None = None) -> Any:
    """First component of ``(g, phi)**n`` by square-and-multiply.

    Bits are consumed least significant first and the accumulator is always
    the left factor, so every endomorphism power actually applied is
    ``phi**(2**i)``.  At most ``2 * floor(log2(n))`` products are formed.
    """
    if n < 1:
        raise ValueError("exponent must be a positive integer")
    base = SdElement(g, 1)
    acc = None
    while True:
        if n & 1:
            if acc is None:
                acc = base
            else:
                acc = sd_mul(acc, base, phi)
                if counter is not None:
                    counter()
        n >>= 1
        if not n:
            return acc.first
        base = sd_mul(base, base, phi)
        if counter is not None:
            counter()


def sd_pow_linear(g: Any, phi: Endomorphism, n: int) -> Any:
    """``phi**(n-1)(g) * ... * phi(g) * g`` built one factor at a time.

    Uses ``a_1 = g`` and ``a_k = phi(a_{k-1}) * g``.  Linear in ``n``; serves
    as the reference the fast paths are checked against.
    """
    if n < 1:
        raise ValueError("exponent must be a positive integer")
    acc = g
    for _ in range(n - 1):
        acc = phi.mul(phi.apply(1, acc), g)
    return acc


def derive_shared(received: Any, own_exp: int, own_outbound: Any, phi: Endomorphism) -> Any:
    """Key ``phi**own_exp(received) * own_outbound``."""
    return phi.mul(phi.apply(own_exp, received), own_outbound)


class Role(enum.Enum):
    INITIATOR = "initiator"
    RESPONDER = "responder"


@dataclass(eq=False)
class ProtocolSession:
    """One party's side of an exchange.

    The private exponent lives only here; ``outbound`` is what goes on the
    wire.  A session must be driven from a single thread.
    """

    role: Role
    g: Any
    phi: Endomorphism
    private_exp: int = field(repr=False)
    outbound: Any = field(init=False, repr=False)
    key: Any = field(init=False, default=None, repr=False)

    def __post_init__(self):
        if self.private_exp < 1:
            raise ValueError("private exponent must be a positive integer")
        self.outbound = sd_pow(self.g, self.phi, self.private_exp)

    def receive(self, transmission: Any) -> Any:
        self.key = derive_shared(transmission, self.private_exp, self.outbound, self.phi)
        return self.key


def run_exchange(g: Any, phi: Endomorphism, m: int, n: int) -> tuple[Any, Any]:
    """Run both parties in-process and return ``(K_initiator, K_responder)``."""
    alice = ProtocolSession(Role.INITIATOR, g, phi, m)
    bob = ProtocolSession(Role.RESPONDER, g, phi, n)
    return alice.receive(bob.outbound), bob.receive(alice.outbound)
