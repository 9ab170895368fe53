"""
Parameter sweep from Python and from the shell
==============================================

The ``noisybell sweep`` command writes one CSV row per (lam, eps) point.
The same rows can be produced directly from the library.
"""

import io

from noisybell.cli import main
from noisybell.report import success_report, write_csv

# library route
buf = io.StringIO()
write_csv([success_report(lam, eps) for lam in (0.2, 0.8) for eps in (0.0, 0.6)], buf)
print(buf.getvalue())

# command-line route, identical columns
main(["sweep", "--lambda", "0.2,0.8", "--epsilon", "0,0.6"])
