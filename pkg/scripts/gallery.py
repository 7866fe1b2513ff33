"""A tour of the constructions, printed as records.

    python scripts/gallery.py
"""

from fractions import Fraction

from efftop.cli import main

RUNS = [
    ["demo", "theta-epsilon"],
    ["demo", "square-formal-vs-actual"],
    ["demo", "parity-oracle"],
    ["member", "--open", "union:[basic:0;1,interval:2,3]", "--point", "5/2"],
    ["incl", "--space", "unit-interval", "(1/2;2)", "(1/2;1)"],
    ["convert", "--direction", "spreen-lacombe", "--open", "interval:0,1", "--limit", "8"],
    ["convert", "--direction", "nogina-lacombe", "--dense", "default", "--open", "basic:0;1",
     "--fuel", "300000", "--limit", "4"],
    ["modulus", "--function", "square", "--phi", "square-local", "--samples", "200"],
    ["modulus", "--function", "square", "--phi", "eps", "--samples", "200"],
]

if __name__ == "__main__":
    for argv in RUNS:
        print("$ efftop " + " ".join(argv))
        code = main(argv)
        print(f"(exit {code})\n")
