"""Figures written next to the command-line reports (PNG, SVG or PDF by
file extension)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_explanations(named_reports, path):
    """Size against run steps, one point per explanation (log axes)."""
    fig, ax = plt.subplots(figsize=(5, 4))
    for name, r in named_reports:
        ax.scatter(r.size, r.run_steps, s=40)
        ax.annotate(name, (r.size, r.run_steps), textcoords="offset points", xytext=(6, 4))
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("program + input bytes")
    ax.set_ylabel("run steps")
    ax.set_title("explanations of one statement")
    return _save(fig, path)


def plot_polynomial(poly, path, threshold=None, bound=None):
    """The polynomial over [0, max(threshold + 2, small bound)], with the split
    point of the proof marked."""
    right = max(threshold + 2 if threshold is not None else 0, min(bound or 10, 60), 4)
    xs = list(range(right + 1))
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(xs, [poly(x) for x in xs], marker="o", ms=3)
    ax.axhline(0, color="black", lw=0.8)
    if threshold is not None:
        ax.axvline(threshold + 0.5, color="tab:red", ls="--", label=f"split after x = {threshold}")
        ax.legend()
    ax.set_xlabel("x")
    ax.set_ylabel(str(poly))
    return _save(fig, path)


def plot_centroid(data, point, label, path):
    if data.dim != 2:
        raise ValueError("only two-dimensional data can be drawn")
    fig, ax = plt.subplots(figsize=(5, 5))
    for lab in data.labels():
        pts = [v for v, name in data.points if name == lab]
        ax.scatter([float(v[0]) for v in pts], [float(v[1]) for v in pts], s=10, label=lab)
    ax.scatter([float(point[0])], [float(point[1])], marker="*", s=200, color="black",
               label=f"query: {label}")
    ax.legend()
    ax.set_aspect("equal")
    return _save(fig, path)


def plot_trace_text(text, path):
    """A rendered multiplication or division trace, typeset in monospace."""
    lines = text.rstrip("\n").splitlines()
    width = max(map(len, lines), default=1)
    fig = plt.figure(figsize=(max(2.0, 0.12 * width + 0.6), 0.25 * len(lines) + 0.6))
    fig.text(0.5, 0.5, "\n".join(lines), family="monospace", ha="center", va="center")
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_remainders(trace, path):
    """Partial remainder after each digit of a long division, against the divisor."""
    fig, ax = plt.subplots(figsize=(5, 3))
    rs = [r for _, _, r in trace.steps]
    ax.bar(range(1, len(rs) + 1), rs)
    ax.axhline(trace.divisor, color="tab:red", ls="--", label=f"divisor {trace.divisor}")
    ax.set_xlabel("digit of the dividend")
    ax.set_ylabel("partial remainder")
    ax.legend()
    return _save(fig, path)
