import math

import numpy as np

from iss.rate_model import Encoding, InterferenceView


def mu_for_level(level):
    """Price whose water level ``1 / (ln2 * price)`` equals ``level``."""
    return 1.0 / (math.log(2) * level)


def make_view(h, hc, p_other, r_other=None, encoding=Encoding.CIE, other_rate=None):
    h, hc, p_other = (np.atleast_1d(np.asarray(a, float)) for a in (h, hc, p_other))
    if r_other is not None:
        r_other = np.broadcast_to(np.asarray(r_other, float), h.shape).copy()
    if other_rate is None:
        other_rate = 0.0 if r_other is None else float(np.mean(r_other))
    return InterferenceView(h, hc, p_other, r_other, other_rate, encoding)


# acceptance verdicts, printed by the terminal-summary hook in conftest
VERDICTS = []


def verdict(key, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}"
    VERDICTS.append(line)
    print(line)
    return ok
