"""Figures for sweep output.  matplotlib is imported lazily with the Agg backend."""
import numpy as np


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def _split(columns):
    """Group measure columns ``state:...:measure`` by measure."""
    groups = {}
    for i, c in enumerate(columns):
        if ":" in c:
            state, measure = c.rsplit(":", 1)
            groups.setdefault(measure, []).append((i, state))
    return groups


LABELS = {
    "m_tr": r"$\mathcal{M}_{\rm tr}$",
    "m_hs": r"$\mathcal{M}_{\rm HS}$",
    "m_sigma": r"$\mathcal{M}_\sigma$",
    "a_a": r"$\mathcal{A}_a$",
    "skew": r"$I_W$",
}


def render(kind, columns, rows, path, title=None):
    """Write a figure for a ``sweep-n``, ``sweep-axis`` or ``evolve`` table to ``path``."""
    plt = _pyplot()
    data = np.asarray(rows, dtype=float)
    groups = _split(columns)
    fig, axes = plt.subplots(1, len(groups), figsize=(4.2 * len(groups), 3.6), squeeze=False)
    x = data[:, 0]
    for ax, (measure, cols) in zip(axes[0], groups.items()):
        for i, state in cols:
            y = data[:, i]
            if kind == "sweep-n" and measure != "m_sigma":
                ax.loglog(x, np.where(y > 0, y, np.nan), "o-", ms=3, label=state)
            else:
                ax.plot(x, y, "-", label=state)
        ax.set_ylabel(LABELS.get(measure, measure))
        ax.set_xlabel({"sweep-n": "$N$", "sweep-axis": r"$\vartheta$", "evolve": r"$\tau$"}.get(kind, columns[0]))
        ax.legend(fontsize=7)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
