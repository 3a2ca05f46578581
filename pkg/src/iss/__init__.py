"""Two-user multicarrier spectrum sharing: iterative spectrum shaping with
opportunistic multiuser detection, and the iterative water-filling baseline."""

from .channel import ChannelConfig, ChannelRealization, draw_realization
from .cie import CieUpdate, p3_optimum, solve_p1
from .cje import CjeUpdate, biased_root, p2_inner, solve_p2, solve_p6
from .engine import Algorithm, ConvergenceTrace, UserConfig, audit_feasibility, run
from .iwf import solve_iwf
from .numerics import Bracket, BracketError, ConvergenceError, bisect_root, cap, dual_bisect
from .rate_model import DecodingMethod, Encoding, InterferenceView, SubcarrierView, p_threshold, rate_cie, rate_cje

__version__ = "0.1.0"
