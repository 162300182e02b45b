#!/usr/bin/env python3
"""Smoke test for the wuyang_py extension module.

Builds nothing itself: run `cargo build --release -p wuyang-py` first, then
`python3 python/smoke_test.py`. Loads the module straight from the cargo
target directory and exercises the main types and operations.
"""
import importlib.machinery
import importlib.util
import math
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / "release" / "libwuyang_py.so",
        ROOT / "target" / "debug" / "libwuyang_py.so",
    ]
    for path in candidates:
        if path.exists():
            loader = importlib.machinery.ExtensionFileLoader("wuyang_py", str(path))
            spec = importlib.util.spec_from_file_location("wuyang_py", str(path), loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("libwuyang_py.so not found; run `cargo build --release -p wuyang-py` first")


def approx(a, b, tol):
    assert abs(a - b) < tol, f"{a} != {b} (tol {tol})"


def main():
    wy = load_module()
    checks = 0

    # drive parameters in the paper-style MHz convention
    params = wy.DriveParams.from_mhz(30.0, 0.0, 10.0)
    approx(params.delta1, 2 * math.pi * 30, 1e-12)
    checks += 1

    # Hamiltonian at the north pole is diagonal with ±Δ₁/2
    h = wy.build_hamiltonian(params, 0.0, 0.0)
    approx(h[0][0].real, math.pi * 30, 1e-9)
    approx(abs(h[0][1]), 0.0, 1e-12)
    checks += 1

    # eigensystem: symmetric gap, normalized states
    (e0, e1), (psi0, psi1) = wy.eigensystem(params, math.pi / 3, 0.4)
    approx(e0, -e1, 1e-9)
    approx(sum(abs(c) ** 2 for c in psi0), 1.0, 1e-12)
    checks += 1

    # Berry curvature of the sphere case: ±sin(θ)/2 per band, both routes
    sphere = wy.DriveParams.from_mhz(10.0, 0.0, 10.0)
    f = wy.berry_curvature(sphere, math.pi / 2, 0.0, band="ground", route="spectral")
    approx(f, 0.5, 1e-10)
    f = wy.berry_curvature(sphere, math.pi / 2, 0.0, band="excited", route="qgt")
    approx(f, -0.5, 1e-6)
    checks += 1

    # Fubini-Study metric of the sphere map: E = 1/4, G = sin²θ/4
    e, f_, g = wy.fubini_study_metric(sphere, math.pi / 3)
    approx(e, 0.25, 1e-12)
    approx(g, 0.25 * math.sin(math.pi / 3) ** 2, 1e-12)
    checks += 1

    # Chern numbers: ground +1, excited -1, outside 0; integer-exact plaquette
    c = wy.chern(params, band="ground", route="plaquette")
    assert c.rounded == 1 and c.residual < 1e-12, repr(c)
    c = wy.chern(params, band="excited", route="plaquette")
    assert c.rounded == -1, repr(c)
    outside = wy.DriveParams.from_mhz(30.0, 60.0, 10.0)
    assert wy.chern(outside, band="ground", route="plaquette").rounded == 0
    c = wy.chern(params, band="ground", route="spectral", grid=(128, 128))
    approx(c.value, 1.0, 1e-3)
    checks += 1

    # two-patch route: C₁ = 2g, including a Dirac-condition warning
    assert wy.wu_yang_chern(0.5).rounded == 1
    assert wy.wu_yang_chern(-1.5).rounded == -3
    assert wy.wu_yang_chern(0.3).note is not None
    checks += 1

    # Wilson loop: |phase| = π at the equator of the sphere map
    phase = wy.berry_phase_loop(sphere, math.pi / 2, band="ground", n_phi=512)
    approx(abs(phase), math.pi, 1e-3)
    checks += 1

    # flux law: 4πg at any radius
    for r in (0.5, 1.0, 2.0):
        approx(wy.monopole_flux(0.5, r=r), 2 * math.pi, 1e-9)
    checks += 1

    # Gauss-Bonnet: euler estimate 2 for the closed sphere and the hemisphere split
    bulk, boundary, euler = wy.gauss_bonnet()
    approx(euler, 2.0, 1e-4)
    bulk, boundary, euler = wy.gauss_bonnet(theta_cap_over_pi=0.5)
    approx(bulk + boundary, 4 * math.pi, 1e-3)
    checks += 1

    # quench: extracted curvature near 3/2 at the equator for the ellipsoid
    rec = wy.quench(params, t_ramp=2.0, samples=801)
    i = min(range(len(rec["theta"])), key=lambda k: abs(rec["theta"][k] - math.pi / 2))
    approx(rec["f_theta_phi"][i], 1.5, 0.1)
    approx(rec["velocity"], math.pi / 2.0, 1e-12)
    c = wy.chern(params, band="ground", route="dynamical", t_ramp=1.0)
    approx(c.value, 1.0, 0.05)
    checks += 1

    # fidelity: slow ramp flips the bare state when the charge is enclosed
    assert wy.ramp_fidelity(params, t_ramp=20.0, target="bare_e") > 0.99
    assert wy.ramp_fidelity(outside, t_ramp=20.0, target="bare_g") > 0.99
    checks += 1

    # transition curve: step function in the detuning ratio
    ratios, cherns = wy.transition_curve(params, [-2.0, 0.0, 2.0], grid=(24, 24))
    assert [round(c) for c in cherns] == [0, 1, 0], cherns
    checks += 1

    print(f"wuyang_py smoke test: {checks} check groups passed")


if __name__ == "__main__":
    main()
