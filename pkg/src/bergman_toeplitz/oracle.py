"""Brute-force Monte-Carlo integration over the domain, independent of the closed forms.

Points are drawn uniformly from the polydisc (each coordinate by square-to-disc
rejection) and kept when sum |z_i|^(2 m_i) < 1. Every chunk of samples has its own
Philox stream keyed by (seed, chunk index), and chunk sums are reduced in index order,
so results do not depend on how many threads evaluate the chunks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .calculus import norm_sq
from .core import DomainSpec, InputError, MonomialSymbol, weighted_degree

DEFAULT_SAMPLES = 10**7
DEFAULT_SEED = 0x5EED
DEFAULT_CHUNK = 1 << 18


@dataclass(frozen=True)
class McConfig:
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    chunk: int = DEFAULT_CHUNK
    threads: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise InputError("samples must be >= 1")
        if self.chunk < 1:
            raise InputError("chunk must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")
        if self.threads < 1:
            raise InputError("threads must be >= 1")


@dataclass(frozen=True)
class McResult:
    estimate: complex
    stderr: float
    stderr_imag: float
    samples: int
    seed: int

    @property
    def real(self) -> float:
        return float(self.estimate.real)

    def to_json(self) -> dict:
        return {
            "estimate": self.estimate.real,
            "estimate_imag": self.estimate.imag,
            "stderr": self.stderr,
            "stderr_imag": self.stderr_imag,
            "samples": self.samples,
            "seed": self.seed,
        }


def _rng(seed: int, chunk_index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, chunk_index]))


def _unit_disc(rng: np.random.Generator, size: int) -> np.ndarray:
    out = np.empty(0, dtype=complex)
    while len(out) < size:
        need = size - len(out)
        xy = rng.uniform(-1.0, 1.0, size=(int(need * 1.3) + 64, 2))
        z = xy[:, 0] + 1j * xy[:, 1]
        out = np.concatenate([out, z[np.abs(z) < 1.0]])
    return out[:size]


def polydisc_points(n: int, seed: int, chunk_index: int, size: int) -> np.ndarray:
    rng = _rng(seed, chunk_index)
    return np.stack([_unit_disc(rng, size) for _ in range(n)], axis=1)


def _chunk_sums(domain, integrand, seed, chunk_index, size):
    z = polydisc_points(domain.n, seed, chunk_index, size)
    rho = (np.abs(z) ** (2 * np.asarray(domain.m))).sum(axis=1)
    inside = rho < 1.0
    g = np.zeros(size, dtype=complex)
    if inside.any():
        g[inside] = integrand(z[inside], np.sqrt(rho[inside]))
    return (
        g.real.sum(),
        g.imag.sum(),
        (g.real**2).sum(),
        (g.imag**2).sum(),
    )


def _integrate(domain: DomainSpec, integrand, cfg: McConfig) -> McResult:
    """Estimate the integral of ``integrand(z, r)`` over the domain."""
    sizes = [cfg.chunk] * (cfg.samples // cfg.chunk)
    if cfg.samples % cfg.chunk:
        sizes.append(cfg.samples % cfg.chunk)

    def work(k):
        return _chunk_sums(domain, integrand, cfg.seed, k, sizes[k])

    if cfg.threads == 1:
        parts = [work(k) for k in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    tot = np.zeros(4)
    for part in parts:
        tot += np.asarray(part)
    n = cfg.samples
    vol = math.pi**domain.n
    mean_re, mean_im = tot[0] / n, tot[1] / n
    var_re = max(tot[2] / n - mean_re**2, 0.0)
    var_im = max(tot[3] / n - mean_im**2, 0.0)
    return McResult(
        estimate=complex(vol * mean_re, vol * mean_im),
        stderr=vol * math.sqrt(var_re / n),
        stderr_imag=vol * math.sqrt(var_im / n),
        samples=n,
        seed=cfg.seed,
    )


def mc_volume(domain: DomainSpec, cfg: McConfig = McConfig()) -> McResult:
    return _integrate(domain, lambda z, r: np.ones(len(z)), cfg)


def mc_inner_product(domain: DomainSpec, sym: MonomialSymbol, beta, lam, cfg: McConfig = McConfig()) -> McResult:
    """Estimate <T_sym z^beta, z^lam> = integral of r^l zeta^p conj(zeta)^q z^beta conj(z)^lam dV."""
    if not sym.exact and float(sym.l) < 0:
        raise InputError("radial exponent must be >= 0")
    for idx in (beta, lam, sym.p):
        if len(idx) != domain.n:
            raise InputError("dimension mismatch")
    # zeta_i = z_i / r^(1/m_i), so r^l zeta^p conj(zeta)^q = r^(l - |p^| - |q^|) z^p conj(z)^q
    radial = float(sym.l) - float(weighted_degree(domain, sym.p) + weighted_degree(domain, sym.q))
    hol = np.asarray(sym.p) + np.asarray(beta)
    anti = np.asarray(sym.q) + np.asarray(lam)

    def integrand(z, r):
        val = r**radial
        for i in range(domain.n):
            val = val * z[:, i] ** hol[i] * np.conj(z[:, i]) ** anti[i]
        return val

    return _integrate(domain, integrand, cfg)


def oracle_action_coefficient(domain: DomainSpec, sym: MonomialSymbol, beta, cfg: McConfig = McConfig()) -> McResult:
    """Brute-force counterpart of the closed-form action coefficient, with its standard error."""
    target = tuple(b + p - q for b, p, q in zip(beta, sym.p, sym.q))
    if any(v < 0 for v in target):
        raise InputError("beta + p must dominate q for a non-zero coefficient")
    res = mc_inner_product(domain, sym, beta, target, cfg)
    scale = norm_sq(domain, target)
    return McResult(
        estimate=res.estimate / scale,
        stderr=res.stderr / scale,
        stderr_imag=res.stderr_imag / scale,
        samples=res.samples,
        seed=res.seed,
    )
