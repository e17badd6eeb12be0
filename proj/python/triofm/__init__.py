"""Block eigensolver with triangularized orthogonalization-free iterations."""

from triofm._core import *  # noqa: F401,F403
from triofm._core import __version__  # noqa: F401
