"""Poschl--Teller bundle with a known spectrum: Evans count, spectral flow and Maslov index.

Q B(xi) = -beta + ell(ell+1) sech^2 xi has real eigenvalues kappa^2 - beta - c^2/4.
For ell = 2, beta = 2, c = 1 exactly one of them (1.75) is positive.
"""

from maslov_wave import config as cf
from maslov_wave import pipeline as pl
from maslov_wave import report as rp
from maslov_wave import spectral as spc


def main():
    print("closed-form eigenvalues:", spc.sech2_eigenvalues(2, 2.0, 1.0))
    out = pl.analyze_bundle(spc.sech2_bundle(2, 2.0, 1.0), cf.merged({}))
    for line in rp.summary_lines(out.report):
        print(line)
    print("located eigenvalues:", out.report.details["eigenvalues"])


if __name__ == "__main__":
    main()
