"""Regenerate the FCIDUMP fixtures and reference energies with PySCF.

Usage: python3 fixtures/generate.py
"""
import json
import os

from pyscf import fci, gto, mp, scf
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))


def h4_chain(spacing_bohr):
    atoms = [("H", (0.0, 0.0, i * spacing_bohr)) for i in range(4)]
    return gto.M(atom=atoms, basis="sto-3g", unit="Bohr")


def water(r_oh=0.96, angle=104.5):
    import math

    half = math.radians(angle / 2.0)
    return gto.M(
        atom=[
            ("O", (0.0, 0.0, 0.0)),
            ("H", (r_oh * math.sin(half), 0.0, r_oh * math.cos(half))),
            ("H", (-r_oh * math.sin(half), 0.0, r_oh * math.cos(half))),
        ],
        basis="sto-3g",
        unit="Angstrom",
    )


SYSTEMS = {
    "h2_sto3g": lambda: gto.M(atom="H 0 0 0; H 0 0 0.74", basis="sto-3g"),
    "h4_chain_1.0": lambda: h4_chain(1.0),
    "h4_chain_1.5": lambda: h4_chain(1.5),
    "h4_chain_2.0": lambda: h4_chain(2.0),
    "h4_chain_2.5": lambda: h4_chain(2.5),
    "h4_chain_1.8": lambda: h4_chain(1.8),
    "water_sto3g": water,
}


def main():
    refs = {}
    for name, build in SYSTEMS.items():
        mol = build()
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-12
        mf.conv_tol_grad = 1e-9
        mf.kernel()
        assert mf.converged, name
        fcidump.from_scf(mf, os.path.join(HERE, name + ".fcidump"), tol=1e-15)
        cis = fci.FCI(mf)
        cis.conv_tol = 1e-12
        e_fci = cis.kernel()[0]
        e_mp2 = mp.MP2(mf).kernel()[0]
        refs[name] = {
            "e_hf": mf.e_tot,
            "e_mp2_corr": e_mp2,
            "e_fci": e_fci,
            "mo_energy": mf.mo_energy.tolist(),
        }
    with open(os.path.join(HERE, "reference.json"), "w") as fh:
        json.dump(refs, fh, indent=2, sort_keys=True)
        fh.write("\n")


if __name__ == "__main__":
    main()
