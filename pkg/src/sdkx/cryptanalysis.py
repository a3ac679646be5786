"""Desk-scale attacks: exhaustive exponent search, toy discrete logs and loop
detection for powers of a (possibly singular) matrix.

Every positive result is re-verified by forward computation before it is
returned.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass

from .algebra import GRMatrix, mat_pow
from .platforms import MatrixParams, ToyParams, matrix_closed_form


@dataclass
class AttackResult:
    attack: str
    recovered: object | None
    ops: int
    millis: float
    bound: int = 0
    param_bits: int = 0

    @property
    def found(self) -> bool:
        return self.recovered is not None


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.millis = (time.perf_counter() - self.start) * 1000.0


def brute_force_exponent(H: GRMatrix, M: GRMatrix, A: GRMatrix, bound: int, H_inv: GRMatrix) -> AttackResult:
    """Smallest ``i <= bound`` with ``H**-i (HM)**i == A``.

    Both powers advance by one multiplication per step; ``ops`` counts
    matrix products.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    HM = H @ M
    ops = 1
    left, right = H_inv, HM
    found = None
    with _Timer() as timer:
        for i in range(1, bound + 1):
            if i > 1:
                left = H_inv @ left
                right = right @ HM
                ops += 2
            ops += 1
            if left @ right == A:
                found = i
                break
    if found is not None:
        params = MatrixParams(M, H, H_inv, validate=False)
        if matrix_closed_form(params, found) != A:
            raise AssertionError("recovered exponent failed re-verification")
    return AttackResult("brute", found, ops, timer.millis, bound, bound.bit_length())


def toy_discrete_log(g: int, target: int, p: int, bound: int) -> AttackResult:
    """Smallest ``1 <= e <= bound`` with ``g**e == target (mod p)``."""
    target %= p
    acc = 1
    found = None
    ops = 0
    with _Timer() as timer:
        for e in range(1, bound + 1):
            acc = acc * g % p
            ops += 1
            if acc == target:
                found = e
                break
    if found is not None and pow(g, found, p) != target:
        raise AssertionError("discrete log failed re-verification")
    return AttackResult("dlog", found, ops, timer.millis, bound, p.bit_length())


def multiplicative_order(g: int, p: int) -> int:
    """Order of ``g`` mod ``p`` by iteration."""
    acc, d = g % p, 1
    while acc != 1:
        acc = acc * g % p
        d += 1
    return d


def toy_break_key(params: ToyParams, a: int, b: int) -> AttackResult:
    """Recover the shared key from ``(g, a, b)`` with two discrete logs.

    With ``E_m = (k**m - 1)/(k - 1)`` we have ``a = g**E_m`` and
    ``K = b**(k**m) * a``.  The first log gives ``E_m`` modulo ``ord(g)``, hence
    ``k**m = (k - 1) E_m + 1`` modulo ``ord(g)``; the second recovers an
    exponent ``m'`` with ``k**m' = k**m`` modulo ``ord(g)``, which yields the
    same key.
    """
    p, g, k = params.p, params.g, params.k
    order = multiplicative_order(g, p)
    first = toy_discrete_log(g, a, p, order)
    if not first.found:
        raise ValueError("a is not in the subgroup generated by g")
    k_pow = ((k - 1) * first.recovered + 1) % order
    second = toy_discrete_log(k % order, k_pow, order, order)
    ops = first.ops + second.ops
    millis = first.millis + second.millis
    if not second.found:
        return AttackResult("toy-key", None, ops, millis, order, p.bit_length())
    m_prime = second.recovered
    key = params.apply(m_prime, b) * a % p
    return AttackResult("toy-key", key, ops, millis, order, p.bit_length())


def detect_loop(M: GRMatrix, max_steps: int) -> AttackResult:
    """Floyd's tortoise-and-hare over ``M, M**2, M**3, ...``.

    Returns the minimal pair ``(r, s)``, ``r < s``, with ``M**r == M**s``:
    ``r`` is the first index on the cycle and ``s - r`` the cycle length.
    Constant memory.  The pair is found whenever ``s <= max_steps``; a larger
    loop is reported as not found.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    with _Timer() as timer:
        found, ops = _floyd(M, max_steps)
    if found is None:
        return AttackResult("loop", None, ops, timer.millis, max_steps, max_steps.bit_length())
    r, s = found
    if mat_pow(M, r) != mat_pow(M, s):
        raise AssertionError("loop failed re-verification")
    return AttackResult("loop", (r, s), ops, timer.millis, max_steps, max_steps.bit_length())


def _floyd(M: GRMatrix, max_steps: int) -> tuple[tuple[int, int] | None, int]:
    tortoise, hare = M, M @ M
    ops = 1
    meet = None
    for i in range(1, max_steps + 1):
        # tortoise = M**i, hare = M**(2i)
        if tortoise == hare:
            meet = i
            break
        tortoise = tortoise @ M
        hare = hare @ M @ M
        ops += 3
    if meet is None:
        return None, ops
    # meet is a multiple of the period, so M**j == M**(j + meet) iff j >= r.
    r = 1
    tortoise, hare = M, mat_pow(M, 1 + meet)
    ops += 2 * (1 + meet).bit_length()
    while tortoise != hare:
        tortoise = tortoise @ M
        hare = hare @ M
        ops += 2
        r += 1
    period = 1
    probe = tortoise @ M
    ops += 1
    while probe != tortoise:
        probe = probe @ M
        period += 1
        ops += 1
    return (r, r + period), ops


def results_csv(results: list[AttackResult]) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["attack", "param_bits", "bound", "recovered", "ops", "millis"])
    for res in results:
        rec = res.recovered
        if rec is None:
            rec = ""
        elif isinstance(rec, tuple):
            rec = ":".join(str(v) for v in rec)
        w.writerow([res.attack, res.param_bits, res.bound, rec, res.ops, f"{res.millis:.3f}"])
    return out.getvalue()
