"""
Recurrences

Polynomial evaluation schemes written once for every operand type.

Each scheme receives `mul`, which applies the matrix argument to an operand,
and `one`, the operand playing the identity: an array of ones for scalar
samples, I for dense matrices, or v when acting on a vector. The same
arithmetic therefore runs in all three settings.
"""

from typing import Callable, Sequence, TypeVar

T = TypeVar("T")


def horner_shifted(coefficients: Sequence[float], mul: Callable[[T], T], one: T) -> T:
    """sum_n c_n (X - I)^n by Horner's rule."""
    acc = coefficients[-1] * one
    for c in coefficients[-2::-1]:
        acc = mul(acc) - acc + c * one
    return acc


def horner_power(coefficients: Sequence[float], mul: Callable[[T], T], one: T) -> T:
    """sum_n c_n X^n by Horner's rule."""
    acc = coefficients[-1] * one
    for c in coefficients[-2::-1]:
        acc = mul(acc) + c * one
    return acc


def chebyshev_forward(coefficients: Sequence[float], mul: Callable[[T], T], one: T) -> T:
    """
    Primed Chebyshev sum sum'_n c_n T_n(Y) by the three-term recurrence.

    `mul` applies Y, the argument already mapped to [-1, 1]. Only two
    recurrence terms are alive at any time.
    """
    result = 0.5 * coefficients[0] * one
    if len(coefficients) == 1:
        return result
    previous, current = one, mul(one)
    result = result + coefficients[1] * current
    for c in coefficients[2:]:
        previous, current = current, 2.0 * mul(current) - previous
        result = result + c * current
    return result


def chebyshev_clenshaw(coefficients: Sequence[float], mul: Callable[[T], T], one: T) -> T:
    """Primed Chebyshev sum by Clenshaw's backward recurrence."""
    b1 = 0.0 * one
    b2 = 0.0 * one
    for c in coefficients[:0:-1]:
        b1, b2 = c * one + 2.0 * mul(b1) - b2, b1
    return 0.5 * coefficients[0] * one + mul(b1) - b2
