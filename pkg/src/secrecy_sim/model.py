"""System configuration for a spectrum-sharing network under eavesdropping.

A system is a set of source-destination pairs that take turns on a shared
band while a common eavesdropper listens.  Each pair carries the mean squared
fading gain of its main channel and of its channel to the eavesdropper, plus
the fraction of time it holds the band (duty cycle).  Gains are stored as
means of the squared channel magnitude, i.e. the means of the exponential
distributions the squared Rayleigh gains follow.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "NONCOOP",
    "SC_RJS",
    "SC_OJS",
    "SCHEMES",
    "PairParams",
    "SystemConfig",
    "SnrSweep",
    "make_symmetric_config",
    "validate",
    "require_valid",
    "parse_config_text",
    "load_config",
]

# Protection schemes: conventional non-cooperation, and source cooperation
# with random / optimal jammer selection.
NONCOOP = "nonc"
SC_RJS = "rjs"
SC_OJS = "ojs"
SCHEMES = (NONCOOP, SC_RJS, SC_OJS)


@dataclass(frozen=True)
class PairParams:
    """Per-pair channel statistics and medium share.

    sigma2_sd: mean squared gain of the source-to-destination (main) channel.
    sigma2_se: mean squared gain of the source-to-eavesdropper channel; the
        same value is used when this source acts as a jammer, since the
        eavesdropper is common to all pairs.
    alpha: duty cycle, the probability this pair is the active one.
    """

    sigma2_sd: float
    sigma2_se: float
    alpha: float


@dataclass(frozen=True)
class SystemConfig:
    """Ordered collection of source-destination pairs sharing one band."""

    pairs: tuple[PairParams, ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(self.pairs))

    @property
    def n_pairs(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class SnrSweep:
    """Grid of transmit SNR values (linear scale), strictly increasing."""

    gamma_values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(g) for g in self.gamma_values)
        if not values:
            raise ValueError("SNR sweep must contain at least one value")
        if any(g <= 0.0 for g in values):
            raise ValueError("SNR values must be positive")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("SNR values must be strictly increasing")
        object.__setattr__(self, "gamma_values", values)

    @classmethod
    def log_spaced(cls, gamma_lo: float, gamma_hi: float, points: int) -> "SnrSweep":
        if points < 2:
            raise ValueError("log-spaced sweep needs at least 2 points")
        if not 0.0 < gamma_lo < gamma_hi:
            raise ValueError("need 0 < gamma_lo < gamma_hi")
        ratio = (gamma_hi / gamma_lo) ** (1.0 / (points - 1))
        values = [gamma_lo * ratio**k for k in range(points - 1)]
        values.append(gamma_hi)
        return cls(tuple(values))


def make_symmetric_config(n: int, mer: float) -> SystemConfig:
    """Build the symmetric configuration used throughout the experiments.

    All pairs get duty cycle 1/n and unit eavesdropper gain; the main-channel
    gain is the main-to-eavesdropping ratio (MER), so sigma2_sd / sigma2_se
    equals `mer` exactly.
    """
    if n < 1:
        raise ValueError(f"number of pairs must be >= 1, got {n}")
    if not mer > 0.0:
        raise ValueError(f"MER must be positive, got {mer}")
    pair = PairParams(sigma2_sd=float(mer), sigma2_se=1.0, alpha=1.0 / n)
    return SystemConfig(pairs=(pair,) * n)


def validate(config: SystemConfig) -> str | None:
    """Return a description of the first violated invariant, or None if valid.

    Checks positivity of all gains, per-pair duty cycles in [0, 1], and the
    constraint that duty cycles sum to at most 1 (the pairs share one band).
    """
    if config.n_pairs < 1:
        return "config has no pairs"
    for i, p in enumerate(config.pairs):
        if not p.sigma2_sd > 0.0:
            return f"pair {i}: nonpositive gain sigma2_sd={p.sigma2_sd}"
        if not p.sigma2_se > 0.0:
            return f"pair {i}: nonpositive gain sigma2_se={p.sigma2_se}"
        if not 0.0 <= p.alpha <= 1.0:
            return f"pair {i}: duty cycle {p.alpha} outside [0, 1]"
    total = sum(p.alpha for p in config.pairs)
    if total > 1.0 + 1e-12:
        return f"duty cycles sum {total:g} > 1"
    return None


def require_valid(config: SystemConfig) -> None:
    """Raise ValueError if the configuration violates any invariant."""
    problem = validate(config)
    if problem is not None:
        raise ValueError(f"invalid system config: {problem}")


def parse_config_text(text: str) -> SystemConfig:
    """Parse the flat text config format.

    Grammar (one statement per line, '#' starts a comment):

        symmetric N MER          shorthand for make_symmetric_config(N, MER)
        SD_GAIN SE_GAIN ALPHA    one explicit pair per line

    The symmetric shorthand must be the only statement in the file.
    """
    pairs: list[PairParams] = []
    symmetric: tuple[int, float] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "symmetric":
            if len(fields) != 3:
                raise ValueError(f"line {lineno}: expected 'symmetric N MER'")
            if symmetric is not None or pairs:
                raise ValueError(f"line {lineno}: 'symmetric' must be the only statement")
            symmetric = (int(fields[1]), float(fields[2]))
            continue
        if symmetric is not None:
            raise ValueError(f"line {lineno}: pair line after 'symmetric' shorthand")
        if len(fields) != 3:
            raise ValueError(f"line {lineno}: expected 'sd_gain se_gain alpha', got {raw!r}")
        sd, se, alpha = (float(f) for f in fields)
        pairs.append(PairParams(sigma2_sd=sd, sigma2_se=se, alpha=alpha))
    if symmetric is not None:
        return make_symmetric_config(*symmetric)
    if not pairs:
        raise ValueError("config text contains no pairs")
    return SystemConfig(pairs=tuple(pairs))


def load_config(path) -> SystemConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())
