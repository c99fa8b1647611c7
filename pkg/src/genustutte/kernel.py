"""Kernel selection: compiled extension when available, pure Python otherwise.

Set GENUSTUTTE_PURE=1 to force the pure-Python kernel regardless of what
was built. Both expose the same three functions with identical results.
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("GENUSTUTTE_PURE"):
    impl = _kernel_py
    HAVE_COMPILED = False
else:
    try:
        from . import _kernel as _compiled
    except ImportError:
        impl = _kernel_py
        HAVE_COMPILED = False
    else:
        impl = _compiled
        HAVE_COMPILED = True

build_rank_table = impl.build_rank_table
whitney_counts = impl.whitney_counts
gf2_rank_table = impl.gf2_rank_table
