# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

try:
    from ._version import __version__, __version_tuple__
except ImportError:  # running from a checkout without build metadata
    __version__ = "0.0.0"
    __version_tuple__ = (0, 0, 0)

__all__ = ["__version__", "__version_tuple__"]
