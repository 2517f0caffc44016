"""Shared exception types.

Two failure modes matter to callers: the input was malformed (reject it), or
the instance was structurally fine but too large for the configured budget
(the caller may retry with a bigger budget or a smaller instance).  The CLI
maps them to exit codes 1 and 2 respectively.
"""

from __future__ import annotations


class ModhomError(Exception):
    """Base class for errors raised by this package."""


class InputError(ModhomError, ValueError):
    """Malformed input, violated precondition, or out-of-range argument."""


class BudgetExceededError(ModhomError, RuntimeError):
    """Instance exceeds a configured size/state budget.

    This is a definitive "too big", never a wrong answer; nothing partial is
    returned.
    """
