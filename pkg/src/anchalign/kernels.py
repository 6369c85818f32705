"""DP kernel selection.

The compiled extension is used when the build produced one; otherwise the
numpy fallback takes over transparently. Both expose the same
solve_rectangle contract and are kept importable side by side so tests and
the benchmark can compare them directly.
"""

from . import _pycore as python_kernel

try:
    from . import _core as compiled_kernel

    HAVE_COMPILED = True
except ImportError:  # extension not built on this install
    compiled_kernel = None
    HAVE_COMPILED = False


def get_kernel():
    return compiled_kernel if HAVE_COMPILED else python_kernel


def kernel_name(kernel) -> str:
    return "compiled" if kernel is compiled_kernel and kernel is not None else "python"
