"""Regenerate the bundled zero-ordinate files with mpmath.

Usage: python3 scripts/gen_zeros.py [--zeta 200] [--chi 100]
"""

from __future__ import annotations

import argparse
from pathlib import Path

import mpmath

OUT = Path(__file__).resolve().parents[1] / "src" / "satake_lab" / "data"


def zeta_zeros(count: int) -> list[mpmath.mpf]:
    return [mpmath.zetazero(k).imag for k in range(1, count + 1)]


def _chi4_hardy(t):
    """Real-valued rotation of L(1/2 + it, chi_-4) on the critical line."""
    s = mpmath.mpc(0.5, t)
    phase = mpmath.exp(1j * mpmath.im(mpmath.loggamma((s + 1) / 2) + (s / 2) * mpmath.log(4 / mpmath.pi)))
    return mpmath.re(phase * mpmath.dirichlet(s, [0, 1, 0, -1]))


def chi4_zeros(count: int, step: float = 0.05) -> list[mpmath.mpf]:
    zeros = []
    t, prev = step, _chi4_hardy(step)
    while len(zeros) < count:
        nxt = _chi4_hardy(t + step)
        if prev * nxt < 0:
            zeros.append(mpmath.findroot(_chi4_hardy, (t, t + step), solver="anderson"))
        t, prev = t + step, nxt
    return zeros


def write(path: Path, label: str, zeros) -> None:
    lines = [f"# L {label}", "# ordinates gamma of zeros 1/2 + i gamma, positive imaginary parts"]
    lines += [mpmath.nstr(z, 15) for z in zeros]
    path.write_text("\n".join(lines) + "\n")


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--zeta", type=int, default=200)
    ap.add_argument("--chi", type=int, default=100)
    args = ap.parse_args()
    mpmath.mp.dps = 25
    OUT.mkdir(parents=True, exist_ok=True)
    write(OUT / "zeros_zeta.txt", "zeta", zeta_zeros(args.zeta))
    write(OUT / "zeros_chi_minus4.txt", "chi_-4", chi4_zeros(args.chi))


if __name__ == "__main__":
    main()
