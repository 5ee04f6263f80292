"""D2D network instances: topology generation, channel model, exact rates.

Instances are immutable after generation. Channel matrices are stored for
every (receiver, transmitter) pair; rates follow the treat-interference-as-
noise MIMO capacity expression in log2 (bits/s/Hz).

The rate functions here are straightforward per-receiver reference
implementations; the schedulers run on the batched kernels in
``fplinq._kernels`` and are cross-checked against these in the tests.
"""

import json
from dataclasses import dataclass, field, replace

import numpy as np

LN2 = np.log(2.0)
SPEED_OF_LIGHT = 299_792_458.0
NONE = -1  # schedule sentinel: receiver not served

# Counter-based RNG streams: one Philox key per (seed, stream) so that
# topology geometry, fading draws, and any scheduler tie-breaking are
# reproducible independently of each other and of evaluation order.
STREAM_TOPOLOGY = 0
STREAM_FADING = 1
STREAM_TIEBREAK = 2


def stream_rng(seed, stream):
    key = np.array([seed, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class TopologyConfig:
    num_links: int = 50
    area_side: float = 1000.0           # m
    link_dist_min: float = 2.0          # m
    link_dist_max: float = 65.0         # m
    num_antennas: int = 1
    carrier_hz: float = 2.4e9
    bandwidth_hz: float = 5e6
    tx_power_max_dbm: float = 20.0
    noise_psd_dbm_hz: float = -169.0
    noise_figure_db: float = 7.0
    antenna_gain_dbi: float = 2.5
    antenna_height_m: float = 1.5
    shadowing_std_db: float = 10.0
    association_mode: str = "fixed_single"   # or "flexible"
    extra_tx_per_rx: int = 2
    frac_tx_extra_rx: float = 1.0 / 3.0
    extra_tx_placement: str = "annulus"      # or "uniform" over the area

    def validate(self):
        if self.num_links < 1:
            raise ValueError("num_links must be >= 1")
        if not self.link_dist_min < self.link_dist_max:
            raise ValueError("link_dist_min must be below link_dist_max")
        if self.num_antennas < 1:
            raise ValueError("num_antennas must be >= 1")
        if self.association_mode not in ("fixed_single", "flexible"):
            raise ValueError(f"unknown association_mode {self.association_mode!r}")
        if self.extra_tx_placement not in ("annulus", "uniform"):
            raise ValueError(f"unknown extra_tx_placement {self.extra_tx_placement!r}")
        return self


def noise_power_watts(cfg: TopologyConfig) -> float:
    """Thermal noise power over the band, noise figure included."""
    dbm = cfg.noise_psd_dbm_hz + 10.0 * np.log10(cfg.bandwidth_hz) + cfg.noise_figure_db
    return 10.0 ** ((dbm - 30.0) / 10.0)


def tx_power_watts(cfg: TopologyConfig) -> float:
    return 10.0 ** ((cfg.tx_power_max_dbm - 30.0) / 10.0)


def pathloss_db(distance_m, cfg: TopologyConfig):
    """ITU-1411 short-range outdoor LOS lower bound, antenna gains applied.

    Breakpoint R_bp = 4 h_tx h_rx / lambda and basic loss at the breakpoint
    L_bp = |20 log10(lambda^2 / (8 pi h_tx h_rx))|; 20 dB/decade inside the
    breakpoint, 40 dB/decade beyond. One antenna gain is subtracted per side.
    """
    lam = SPEED_OF_LIGHT / cfg.carrier_hz
    h = cfg.antenna_height_m
    r_bp = 4.0 * h * h / lam
    l_bp = abs(20.0 * np.log10(lam * lam / (8.0 * np.pi * h * h)))
    d = np.asarray(distance_m, dtype=float)
    ratio = d / r_bp
    loss = l_bp + np.where(ratio <= 1.0, 20.0 * np.log10(ratio), 40.0 * np.log10(ratio))
    return loss - 2.0 * cfg.antenna_gain_dbi


def draw_channel(pl_db, shadow_db, n, rng):
    """n x n channel with i.i.d. unit-variance complex Gaussian fading under
    the given path loss and shadowing (both in dB)."""
    amp = np.sqrt(10.0 ** (-(pl_db + shadow_db) / 10.0))
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    return amp * g


@dataclass(frozen=True, eq=False)
class NetworkInstance:
    """Immutable problem input: channels, associations, budgets.

    ``assoc[j, i]`` marks transmitter i as a candidate for receiver j. The
    flat pair arrays (pair_rx, pair_tx) enumerate the associated pairs in
    row-major order and are what the schedulers and kernels operate on.
    """

    channels: np.ndarray          # (J, I, N, N) complex
    assoc: np.ndarray             # (J, I) bool
    noise_power: float            # sigma^2, watts
    p_max: float                  # per-transmitter power budget, watts
    tx_pos: np.ndarray | None = None   # (I, 2) m
    rx_pos: np.ndarray | None = None   # (J, 2) m
    pair_rx: np.ndarray = field(init=False)
    pair_tx: np.ndarray = field(init=False)

    def __post_init__(self):
        h = np.ascontiguousarray(np.asarray(self.channels, dtype=complex))
        if h.ndim != 4 or h.shape[2] != h.shape[3]:
            raise ValueError("channels must have shape (J, I, N, N)")
        if not np.all(np.isfinite(h.view(float))):
            raise ValueError("channels contain non-finite entries")
        if self.noise_power <= 0 or self.p_max <= 0:
            raise ValueError("noise_power and p_max must be positive")
        a = np.asarray(self.assoc, dtype=bool)
        if a.shape != h.shape[:2]:
            raise ValueError("assoc shape must match channels")
        pj, pi = np.nonzero(a)
        object.__setattr__(self, "channels", h)
        object.__setattr__(self, "assoc", a)
        object.__setattr__(self, "pair_rx", pj.astype(np.int64))
        object.__setattr__(self, "pair_tx", pi.astype(np.int64))

    @property
    def num_rx(self):
        return self.channels.shape[0]

    @property
    def num_tx(self):
        return self.channels.shape[1]

    @property
    def num_antennas(self):
        return self.channels.shape[2]

    @property
    def num_pairs(self):
        return self.pair_rx.shape[0]

    def candidates_of_rx(self, j):
        """K_j: transmitters associated with receiver j."""
        return np.nonzero(self.assoc[j])[0]

    def candidates_of_tx(self, i):
        """L_i: receivers associated with transmitter i."""
        return np.nonzero(self.assoc[:, i])[0]

    def scalar_gains(self):
        """|h|^2 per pair for single-antenna instances."""
        if self.num_antennas != 1:
            raise ValueError("scalar view requires N = 1")
        return np.abs(self.channels[:, :, 0, 0]) ** 2

    def direct_tx(self):
        """The unique candidate per receiver in fixed single association."""
        counts = self.assoc.sum(axis=1)
        if not np.all(counts == 1) or not np.all(self.assoc.sum(axis=0) <= 1):
            raise ValueError("not a fixed single-association instance")
        return np.argmax(self.assoc, axis=1).astype(np.int64)

    # -- serialization -----------------------------------------------------

    def to_json(self):
        h = self.channels
        doc = {
            "noise_power": self.noise_power,
            "p_max": self.p_max,
            "shape": list(h.shape),
            "assoc_pairs": [[int(j), int(i)] for j, i in zip(self.pair_rx, self.pair_tx)],
            "channels": np.stack([h.real, h.imag], axis=-1).reshape(-1).tolist(),
            "tx_pos": None if self.tx_pos is None else self.tx_pos.tolist(),
            "rx_pos": None if self.rx_pos is None else self.rx_pos.tolist(),
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text):
        doc = json.loads(text)
        shape = tuple(doc["shape"])
        flat = np.asarray(doc["channels"], dtype=float).reshape(shape + (2,))
        h = flat[..., 0] + 1j * flat[..., 1]
        assoc = np.zeros(shape[:2], dtype=bool)
        for j, i in doc["assoc_pairs"]:
            assoc[j, i] = True
        pos = {k: None if doc[k] is None else np.asarray(doc[k], dtype=float)
               for k in ("tx_pos", "rx_pos")}
        return cls(channels=h, assoc=assoc, noise_power=doc["noise_power"],
                   p_max=doc["p_max"], **pos)


def instance_from_gains(gains, noise_power=1.0, p_max=1.0, assoc=None):
    """Single-antenna instance with hand-set real channel amplitudes
    sqrt(gains); assoc defaults to the diagonal (fixed single association)."""
    g = np.asarray(gains, dtype=float)
    if assoc is None:
        assoc = np.eye(g.shape[0], g.shape[1], dtype=bool)
    h = np.sqrt(g).astype(complex)[:, :, None, None]
    return NetworkInstance(channels=h, assoc=np.asarray(assoc, dtype=bool),
                           noise_power=noise_power, p_max=p_max)


def generate_topology(cfg: TopologyConfig, seed: int) -> NetworkInstance:
    """Draw a network instance; a pure function of (cfg, seed).

    Transmitters are uniform over the square; each link's receiver sits at a
    uniform distance in [link_dist_min, link_dist_max] and uniform angle. In
    flexible mode each receiver gains ``extra_tx_per_rx`` additional candidate
    transmitters (placed per ``extra_tx_placement``), and a random
    ``frac_tx_extra_rx`` of all transmitters also associate with their
    geographically closest receiver that they are not already connected to
    (ties by lowest receiver index).

    Cross-pair distances below link_dist_min are clamped to it before the
    path-loss evaluation, keeping the LOS model inside its validity range.
    """
    cfg.validate()
    rng_top = stream_rng(seed, STREAM_TOPOLOGY)
    rng_fad = stream_rng(seed, STREAM_FADING)
    L = cfg.num_links

    tx_pos = rng_top.uniform(0.0, cfg.area_side, size=(L, 2))
    dist = rng_top.uniform(cfg.link_dist_min, cfg.link_dist_max, size=L)
    ang = rng_top.uniform(0.0, 2.0 * np.pi, size=L)
    rx_pos = tx_pos + dist[:, None] * np.stack([np.cos(ang), np.sin(ang)], axis=1)

    if cfg.association_mode == "fixed_single":
        assoc = np.eye(L, dtype=bool)
    else:
        extras = []
        for j in range(L):
            for _ in range(cfg.extra_tx_per_rx):
                if cfg.extra_tx_placement == "annulus":
                    d = rng_top.uniform(cfg.link_dist_min, cfg.link_dist_max)
                    a = rng_top.uniform(0.0, 2.0 * np.pi)
                    extras.append(rx_pos[j] + d * np.array([np.cos(a), np.sin(a)]))
                else:
                    extras.append(rng_top.uniform(0.0, cfg.area_side, size=2))
        tx_pos = np.vstack([tx_pos, np.asarray(extras).reshape(-1, 2)])
        num_tx = tx_pos.shape[0]
        assoc = np.zeros((L, num_tx), dtype=bool)
        assoc[np.arange(L), np.arange(L)] = True
        for j in range(L):
            base = L + cfg.extra_tx_per_rx * j
            assoc[j, base:base + cfg.extra_tx_per_rx] = True
        n_extra = int(np.floor(cfg.frac_tx_extra_rx * num_tx))
        chosen = rng_top.choice(num_tx, size=n_extra, replace=False)
        for i in np.sort(chosen):
            d2 = np.sum((rx_pos - tx_pos[i]) ** 2, axis=1)
            d2[assoc[:, i]] = np.inf
            if np.isfinite(d2).any():
                assoc[int(np.argmin(d2)), i] = True

    num_tx = tx_pos.shape[0]
    d_pair = np.linalg.norm(rx_pos[:, None, :] - tx_pos[None, :, :], axis=2)
    d_pair = np.maximum(d_pair, cfg.link_dist_min)
    pl = pathloss_db(d_pair, cfg)
    shadow = rng_fad.normal(0.0, cfg.shadowing_std_db, size=(L, num_tx))
    n = cfg.num_antennas
    fade = (rng_fad.standard_normal((L, num_tx, n, n))
            + 1j * rng_fad.standard_normal((L, num_tx, n, n))) / np.sqrt(2.0)
    amp = np.sqrt(10.0 ** (-(pl + shadow) / 10.0))
    h = amp[:, :, None, None] * fade

    return NetworkInstance(channels=h, assoc=assoc,
                           noise_power=noise_power_watts(cfg),
                           p_max=tx_power_watts(cfg),
                           tx_pos=tx_pos, rx_pos=rx_pos)


# --------------------------------------------------------------------------
# schedules, beams, exact rates
# --------------------------------------------------------------------------

def validate_schedule(s, net: NetworkInstance):
    """Schedule: per-receiver transmitter choice, candidate-only, injective."""
    s = np.asarray(s, dtype=np.int64)
    if s.shape != (net.num_rx,):
        raise ValueError("schedule length must equal the number of receivers")
    on = s[s != NONE]
    if np.unique(on).size != on.size:
        raise ValueError("a transmitter is scheduled at more than one receiver")
    for j in np.nonzero(s != NONE)[0]:
        if not net.assoc[j, s[j]]:
            raise ValueError(f"receiver {j} scheduled a non-candidate transmitter {s[j]}")
    return s


def validate_beams(v, net: NetworkInstance, tol=1e-9):
    v = np.asarray(v, dtype=complex)
    power = np.einsum("inr,inr->i", v.conj(), v).real
    if np.any(power > net.p_max * (1.0 + tol)):
        raise ValueError("beamformer exceeds the power budget")
    return v


def full_power_beams(net: NetworkInstance, rank=None):
    """sqrt(p_max/N) I per transmitter (or the rank-1 analogue): the
    isotropic full-power beams used for initialization and on/off rounding."""
    n = net.num_antennas
    if rank == 1:
        col = np.full((n, 1), np.sqrt(net.p_max / n), dtype=complex)
        return np.tile(col, (net.num_tx, 1, 1))
    return np.tile(np.sqrt(net.p_max / n) * np.eye(n, dtype=complex),
                   (net.num_tx, 1, 1))


def interference_plus_noise(j, v, s, net: NetworkInstance):
    """F_j = sigma^2 I + sum over other receivers' scheduled transmitters."""
    n = net.num_antennas
    f = net.noise_power * np.eye(n, dtype=complex)
    for jp in range(net.num_rx):
        if jp == j or s[jp] == NONE:
            continue
        g = net.channels[j, s[jp]] @ v[s[jp]]
        f += g @ g.conj().T
    return f


def link_rate(j, v, s, net: NetworkInstance):
    """R_j = log2 |I + V^H H^H F^{-1} H V| in bits/s/Hz; 0 when unscheduled."""
    if s[j] == NONE:
        return 0.0
    f = interference_plus_noise(j, v, s, net)
    g = net.channels[j, s[j]] @ v[s[j]]
    m = np.eye(v.shape[2], dtype=complex) + g.conj().T @ np.linalg.solve(f, g)
    sign, logdet = np.linalg.slogdet(m)
    return max(logdet / LN2, 0.0)


def weighted_sum_rate(w, v, s, net: NetworkInstance):
    """sum_j w[j, s_j] R_j with unscheduled receivers contributing zero."""
    total = 0.0
    for j in range(net.num_rx):
        if s[j] != NONE:
            total += w[j, s[j]] * link_rate(j, v, s, net)
    return total
