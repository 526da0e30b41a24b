"""Online stable-matching simulation lab: python bindings."""

try:
    from stabsec._stabsec import *  # noqa: F401,F403
except ImportError:  # running against a build tree
    from _stabsec import *  # noqa: F401,F403
