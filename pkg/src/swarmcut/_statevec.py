"""Backend selection for the statevector kernels.

The compiled core is preferred when its extension module imported cleanly;
otherwise the pure-NumPy fallback is used. SWARMCUT_BACKEND=python|cython
forces a choice (forcing cython without the extension built is an error).
"""

import os

_forced = os.environ.get("SWARMCUT_BACKEND", "").strip().lower()
if _forced not in ("", "python", "cython"):
    raise ImportError(f"SWARMCUT_BACKEND must be 'python' or 'cython', got {_forced!r}")

if _forced == "python":
    from . import _statevec_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _statevec_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _forced == "cython":
            raise
        from . import _statevec_py as _impl

        BACKEND = "python"

apply_phase_table = _impl.apply_phase_table
apply_mixer = _impl.apply_mixer
expectation_value = _impl.expectation_value
