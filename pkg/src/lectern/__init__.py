"""Digital-text catalogue engine.

Acquisition and cataloguing of plain-text works, fielded metadata search,
paragraph-level content search, on-demand PDF typesetting, and user-owned
publishable bookcases, exposed through an HTTP service and an admin CLI.
"""

__version__ = "0.1.0"
