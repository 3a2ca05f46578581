"""Alternating best-response iterations between the two users.

User 1 moves first against a silent user 2, then the users take turns.
Each turn the mover solves its best response against the opponent's
current powers and announced rates. ISS users decode the interferer
whenever that helps; IWF users always treat it as noise.
"""

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .cie import solve_p1
from .cje import solve_p2
from .iwf import solve_iwf
from .numerics import ConvergenceError
from .rate_model import DecodingMethod, Encoding, InterferenceView, cie_rates, cje_rate_arrays, sd_rates


class Algorithm(str, enum.Enum):
    ISS = "ISS"
    IWF = "IWF"


@dataclass(frozen=True)
class UserConfig:
    budget: float
    algorithm: Algorithm = Algorithm.ISS
    encoding: Encoding = Encoding.CIE

    def __post_init__(self):
        if not (np.isfinite(self.budget) and self.budget > 0):
            raise ValueError(f"budget must be finite and positive, got {self.budget}")
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        object.__setattr__(self, "encoding", Encoding(self.encoding))

    def to_dict(self):
        return {"budget": self.budget, "algorithm": self.algorithm.value, "encoding": self.encoding.value}


@dataclass
class UpdateRecord:
    """One user's turn.

    ``rates`` holds per-subcarrier rates, or None for a single CJE codeword;
    ``methods`` holds one decoder per subcarrier (repeated under CJE).
    """

    round: int
    user: int
    powers: np.ndarray
    rates: np.ndarray
    methods: np.ndarray
    avg_rate: float
    dual_price: float

    def to_dict(self):
        return {
            "round": self.round,
            "user": self.user,
            "powers": self.powers.tolist(),
            "rates": None if self.rates is None else self.rates.tolist(),
            "methods": [DecodingMethod(int(m)).name for m in self.methods],
            "avg_rate": self.avg_rate,
            "dual_price": self.dual_price,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            round=d["round"], user=d["user"], powers=np.asarray(d["powers"], dtype=float),
            rates=None if d["rates"] is None else np.asarray(d["rates"], dtype=float),
            methods=np.array([DecodingMethod[m] for m in d["methods"]], dtype=int),
            avg_rate=d["avg_rate"], dual_price=d["dual_price"])


@dataclass
class ConvergenceTrace:
    users: tuple
    iterations: list = field(default_factory=list)
    converged: bool = False
    rounds: int = 0
    eps: float = 1e-4
    max_rounds: int = 50

    @property
    def n_updates(self):
        return len(self.iterations)

    def last(self, user):
        for rec in reversed(self.iterations):
            if rec.user == user:
                return rec
        return None

    @property
    def final_rates(self):
        return tuple(rec.avg_rate if rec is not None else 0.0 for rec in (self.last(0), self.last(1)))

    @property
    def final_powers(self):
        out = []
        for u in (0, 1):
            rec = self.last(u)
            out.append(rec.powers if rec is not None else None)
        return out

    @property
    def sum_rate(self):
        return float(sum(self.final_rates))

    def to_dict(self):
        return {
            "users": [u.to_dict() for u in self.users],
            "converged": self.converged,
            "rounds": self.rounds,
            "n_updates": self.n_updates,
            "eps": self.eps,
            "max_rounds": self.max_rounds,
            "final_rates": list(self.final_rates),
            "iterations": [rec.to_dict() for rec in self.iterations],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d):
        trace = cls(users=tuple(UserConfig(**u) for u in d["users"]),
                    iterations=[UpdateRecord.from_dict(r) for r in d["iterations"]],
                    converged=d["converged"], rounds=d["rounds"],
                    eps=d.get("eps", 1e-4), max_rounds=d.get("max_rounds", 50))
        return trace


class RunAborted(ConvergenceError):
    """A solver failed mid-run; ``trace`` holds the updates made so far."""

    def __init__(self, message, trace):
        super().__init__(message)
        self.trace = trace


@dataclass
class _UserState:
    powers: np.ndarray
    rates: np.ndarray  # per-subcarrier, None for a CJE codeword
    total: float


def build_view(ch, user, cfg: UserConfig, other: _UserState) -> InterferenceView:
    """The interference view of ``user`` given the opponent's state."""
    # IWF ignores the opponent's rates, so it may face either encoding
    r_other = other.rates if cfg.encoding is Encoding.CIE else None
    if cfg.algorithm is Algorithm.ISS and cfg.encoding is Encoding.CIE and r_other is None:
        raise ValueError("a CIE user cannot face a CJE codeword")
    return InterferenceView(
        h_dir=ch.direct(user), h_cross=ch.cross_into(user), p_other=other.powers,
        r_other=r_other, other_rate_total=other.total, encoding=cfg.encoding)


def best_response(view: InterferenceView, cfg: UserConfig, round_=0, user=0) -> UpdateRecord:
    n = len(view)
    if cfg.algorithm is Algorithm.IWF:
        up = solve_iwf(view, cfg.budget)
        return UpdateRecord(round_, user, up.powers, up.rates, up.methods, up.avg_rate, up.dual_price)
    if cfg.encoding is Encoding.CIE:
        up = solve_p1(view, cfg.budget)
        return UpdateRecord(round_, user, up.powers, up.rates, up.methods, up.avg_rate, up.dual_price)
    up = solve_p2(view, cfg.budget)
    methods = np.full(n, int(up.method))
    return UpdateRecord(round_, user, up.powers, None, methods, up.rate, up.dual_price)


def _check_configs(u1, u2):
    # IWF users announce per-subcarrier rates and their average, so only
    # two ISS users need to agree on the encoding
    both_iss = u1.algorithm is Algorithm.ISS and u2.algorithm is Algorithm.ISS
    if both_iss and u1.encoding is not u2.encoding:
        raise ValueError("both ISS users must use the same encoding")


def run(ch, u1: UserConfig, u2: UserConfig, eps: float = 1e-4, max_rounds: int = 50) -> ConvergenceTrace:
    """Iterate best responses until both average rates move by at most ``eps`` in a round."""
    _check_configs(u1, u2)
    n = ch.n_subcarriers
    cfgs = (u1, u2)
    state = [_UserState(np.zeros(n), np.zeros(n), 0.0) for _ in cfgs]
    trace = ConvergenceTrace(users=cfgs, eps=eps, max_rounds=max_rounds)

    prev = (0.0, 0.0)
    for rnd in range(1, max_rounds + 1):
        for user in (0, 1):
            view = build_view(ch, user, cfgs[user], state[1 - user])
            try:
                rec = best_response(view, cfgs[user], rnd, user)
            except ConvergenceError as err:
                raise RunAborted(f"round {rnd}, user {user + 1}: {err}", trace) from err
            trace.iterations.append(rec)
            state[user] = _UserState(rec.powers, rec.rates, rec.avg_rate)
        trace.rounds = rnd
        cur = (state[0].total, state[1].total)
        if max(abs(a - b) for a, b in zip(cur, prev)) <= eps:
            trace.converged = True
            break
        prev = cur
    return trace


def achievable_rates(ch, trace: ConvergenceTrace):
    """Rate each user can actually decode at the final joint state."""
    out = []
    for user in (0, 1):
        me, other = trace.last(user), trace.last(1 - user)
        cfg = trace.users[user]
        if me is None:
            out.append(0.0)
            continue
        h, hc = ch.direct(user), ch.cross_into(user)
        p_other = other.powers if other is not None else np.zeros_like(me.powers)
        c = hc * p_other
        if cfg.algorithm is Algorithm.IWF:
            out.append(float(np.mean(sd_rates(h, c, me.powers))))
        elif cfg.encoding is Encoding.CIE:
            r_other = other.rates if other is not None else np.zeros_like(me.powers)
            out.append(float(np.mean(cie_rates(h, c, r_other, me.powers)[0])))
        else:
            r_other = other.avg_rate if other is not None else 0.0
            out.append(cje_rate_arrays(h, c, me.powers, r_other)[0])
    return tuple(out)


@dataclass
class AuditReport:
    claimed: tuple
    achievable: tuple
    flags: list

    @property
    def ok(self):
        return not self.flags


def audit_feasibility(ch, trace: ConvergenceTrace, tol: float = 1e-6) -> AuditReport:
    """Flag users whose announced final rate exceeds what their receiver can decode."""
    claimed = trace.final_rates
    achievable = achievable_rates(ch, trace)
    flags = [u for u in (0, 1) if claimed[u] - achievable[u] > tol]
    return AuditReport(claimed, achievable, flags)
