"""Throughput and accuracy comparison of the curvature schemes."""

from __future__ import annotations

import os
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from wgcurv.core import (
    SchemeConfig,
    as_image,
    gaussian_curvature_classical,
    weighted_curvature_classical,
    weighted_curvature_discrete,
)
from wgcurv.lut import AngleLut, build_full_lut, build_partial_lut
from wgcurv.synth import curvature_stats

SCHEMES = ("classical-k", "classical-kw", "discrete-kw")


def parse_lut(text: str | None):
    """``none`` -> None, ``full`` -> "full", ``partial:T`` -> int T."""
    if text is None or text == "none":
        return None
    if text == "full":
        return "full"
    kind, sep, t = text.partition(":")
    if kind == "partial":
        try:
            return int(t) if sep else 31
        except ValueError:
            pass
    raise ValueError(f"lut must be none, full or partial:T, got {text!r}")


_LUT_CACHE: dict = {}


def get_lut(spec) -> AngleLut | None:
    """Build (once) and return the table described by ``parse_lut`` output."""
    if spec is None:
        return None
    if spec not in _LUT_CACHE:
        _LUT_CACHE[spec] = build_full_lut() if spec == "full" else build_partial_lut(spec)
    return _LUT_CACHE[spec]


@dataclass(frozen=True)
class BenchConfig:
    scheme: str = "discrete-kw"
    lut: str = "none"
    threads: int = 1
    scheme_config: SchemeConfig = SchemeConfig()

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        lut = parse_lut(self.lut)
        if lut is not None:
            if self.scheme != "discrete-kw":
                raise ValueError(f"a lookup table only applies to discrete-kw, not {self.scheme}")
            if self.scheme_config.h != 1.0:
                raise ValueError("a lookup table requires pixel size h == 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    @property
    def label(self) -> str:
        return self.scheme if self.scheme != "discrete-kw" else f"discrete-kw/{self.lut}"


def compute(image, cfg: BenchConfig) -> np.ndarray:
    """Untimed single evaluation of one configuration."""
    sc = cfg.scheme_config
    if cfg.scheme == "classical-k":
        return gaussian_curvature_classical(image, sc, threads=cfg.threads)
    if cfg.scheme == "classical-kw":
        return weighted_curvature_classical(image, sc, threads=cfg.threads)
    return weighted_curvature_discrete(image, sc, get_lut(parse_lut(cfg.lut)), threads=cfg.threads)


@dataclass
class BenchResult:
    config: BenchConfig
    width: int
    height: int
    times: list
    output: np.ndarray | None = None

    @property
    def repetitions(self) -> int:
        return len(self.times)

    @property
    def wall_time(self) -> float:
        return statistics.median(self.times)

    @property
    def megapixels_per_second(self) -> float:
        return self.width * self.height / 1e6 / self.wall_time


@dataclass
class BenchReport:
    results: list
    accuracy: dict = field(default_factory=dict)

    @property
    def accuracy_ratio(self) -> float:
        c, d = self.accuracy.get("classical-kw"), self.accuracy.get("discrete-kw")
        if c is None or d is None:
            return float("nan")
        return c / d if d > 0 else float("inf")

    def to_csv(self) -> str:
        lines = ["scheme,lut,threads,width,height,repetitions,wall_time_s,mpix_per_s"]
        for r in self.results:
            c = r.config
            lines.append(
                f"{c.scheme},{c.lut},{c.threads},{r.width},{r.height},{r.repetitions},"
                f"{r.wall_time:.6f},{r.megapixels_per_second:.3f}"
            )
        for scheme, value in self.accuracy.items():
            lines.append(f"accuracy,{scheme},mean_abs_interior,{value!r}")
        if self.accuracy:
            lines.append(f"accuracy,ratio,classical_over_discrete,{self.accuracy_ratio!r}")
        return "\n".join(lines) + "\n"

    def format_table(self) -> str:
        head = f"{'configuration':<24}{'threads':>8}{'size':>12}{'reps':>6}{'median s':>12}{'MP/s':>10}"
        out = [head, "-" * len(head)]
        for r in self.results:
            size = f"{r.width}x{r.height}"
            out.append(
                f"{r.config.label:<24}{r.config.threads:>8}{size:>12}{r.repetitions:>6}"
                f"{r.wall_time:>12.4f}{r.megapixels_per_second:>10.2f}"
            )
        if self.accuracy:
            out.append("")
            out.append("interior mean |Kw|")
            for scheme, value in self.accuracy.items():
                out.append(f"  {scheme:<22}{value:.6g}")
            out.append(f"  {'ratio (classical/disc)':<22}{self.accuracy_ratio:.3f}")
        return "\n".join(out)


def default_configs(threads: int | None = None, partial_threshold: int = 31) -> list:
    threads = threads or os.cpu_count() or 1
    return [
        BenchConfig("discrete-kw", "none", threads),
        BenchConfig("discrete-kw", "full", threads),
        BenchConfig("discrete-kw", f"partial:{partial_threshold}", threads),
        BenchConfig("classical-kw", "none", threads),
    ]


def accuracy_block(image, scheme_config: SchemeConfig = SchemeConfig(), lut=None) -> dict:
    """Interior mean ``|Kw|`` for both weighted schemes."""
    return {
        "classical-kw": curvature_stats(weighted_curvature_classical(image, scheme_config)).mean_abs,
        "discrete-kw": curvature_stats(weighted_curvature_discrete(image, scheme_config, lut)).mean_abs,
    }


def run_bench(image, configs=None, repetitions: int = 3, *, accuracy: bool = True, keep_outputs: bool = False):
    """Time each configuration: one warm-up pass, then ``repetitions`` timed runs.

    Configurations run one after another. Reported time is the median.
    """
    if repetitions < 3:
        raise ValueError("repetitions must be >= 3")
    image = as_image(image)
    if min(image.shape) < 3:
        raise ValueError("benchmark image must be at least 3x3")
    configs = default_configs() if configs is None else list(configs)
    height, width = image.shape
    results = []
    for cfg in configs:
        get_lut(parse_lut(cfg.lut))  # table construction is not timed
        out = compute(image, cfg)
        times = []
        for _ in range(repetitions):
            t0 = time.perf_counter()
            out = compute(image, cfg)
            times.append(time.perf_counter() - t0)
        results.append(BenchResult(cfg, width, height, times, out if keep_outputs else None))
    report = BenchReport(results)
    if accuracy:
        report.accuracy = accuracy_block(image)
    return report
