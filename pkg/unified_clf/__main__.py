"""Allow `python -m unified_clf`."""

from .cli import main

raise SystemExit(main())
