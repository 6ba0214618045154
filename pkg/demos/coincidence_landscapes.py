"""Walk through the multiphoton coincidence model at a glance.

Prints the frame-size law, the two-photon interference surfaces in
mean/difference momentum coordinates, and the extended-HOM suppression of
balanced outcomes at small separation.  Run with

    python3 demos/coincidence_landscapes.py
"""

import numpy as np

from homsr import (
    PsfModel,
    SourceScene,
    TwoPhotonCoordinates,
    class_weights,
    coincidence_density_grid,
    frame_size_distribution,
    two_photon_density,
)

psf = PsfModel(sigma_x=1.0)

print("=" * 72)
print("Frame-size distribution (N_s = 1.5)")
print("=" * 72)
for s in (0.1, 1.0, 5.0):
    scene = SourceScene(separation=s, brightness=1.5)
    dist = frame_size_distribution(10, scene, psf)
    line = "  ".join(f"P({L})={p:.3f}" for L, p in enumerate(dist[:6], start=1))
    print(f"s = {s:4.1f} sigma_x:  {line}")
print("Small separations brighten the symmetric mode (overlap ~ 1), pushing")
print("probability toward large frames; distinguishable sources fall back to")
print("two balanced thermal modes.")

print()
print("=" * 72)
print("Two-photon surfaces P(Kbar, dk; X) at s = 5 sigma_x")
print("=" * 72)
scene = SourceScene(separation=5.0, brightness=1.5)
dk = np.linspace(-3.0, 3.0, 9) * psf.sigma_k
for cls in ("B", "A"):
    row = two_photon_density(TwoPhotonCoordinates(k_bar=0.0, delta_k=dk), cls, scene, psf)
    cells = " ".join(f"{v:8.5f}" for v in row)
    print(f"class {cls}, Kbar = 0:  {cells}")
print("The bunched (B) and antibunched (A) classes carry complementary")
print("fringes 1 +- cos(dk s / 2); the A surface dips to zero at dk = 0 --")
print("the Hong-Ou-Mandel suppression that survives for thermal light.")

print()
print("=" * 72)
print("Extended HOM: balanced four-photon outcomes vanish as s^2")
print("=" * 72)
k4 = np.array([0.3, -0.7, 0.45, 0.1]) * psf.sigma_k
for s in (1e-1, 1e-2, 1e-3):
    scene = SourceScene(separation=s, brightness=1.5)
    balanced = coincidence_density_grid(4, 2, k4, scene, psf)
    bunched = coincidence_density_grid(4, 0, k4, scene, psf)
    print(f"s = {s:6.0e}:  P(2-2 split) = {balanced:.3e}   P(4-0 split) = {bunched:.3e}")
print("Halving s quarters the balanced density while the bunched outcome is")
print("unaffected -- the quadratic opening that powers sub-Rayleigh imaging.")

print()
print("=" * 72)
print("Momentum-integrated class weights w(L, X) at s = 0.5 sigma_x")
print("=" * 72)
scene = SourceScene(separation=0.5, brightness=1.5)
for L in (2, 3, 4):
    w = class_weights(L, scene, psf)
    w = w / w.sum()
    cells = "  ".join(f"X={X}: {v:.4f}" for X, v in enumerate(w))
    print(f"L = {L}:  {cells}")
