#!/usr/bin/env python3
"""The C3v double group in action: how bands split when spin enters.

The printed decompositions are the bookkeeping behind the (111)-axis band
structure: the s-like band Λ1 becomes the doublet Λ6, and the orbital
doublet Λ3 becomes Λ4 ⊕ Λ5 ⊕ Λ6, with Λ4/Λ5 the time-reversal partner
pair whose polarizations cancel.
"""

from lvalley.grouptheory import (
    SPINOR_D12, builtin_table, decompose, format_table, product, recompose,
)


def main():
    table = builtin_table()
    print(format_table(table))
    print()

    for name in ("Λ1", "Λ2", "Λ3"):
        parts = decompose(product(table.irrep(name), SPINOR_D12), table)
        pretty = " ⊕ ".join(n if m == 1 else f"{m}·{n}" for n, m in parts)
        print(f"{name} ⊗ D1/2 = {pretty}")

    print()
    reg = recompose([(n, r.dimension) for n, r in table.irreps.items()], table)
    print("regular representation characters:",
          [int(c.real) for c in reg.characters])
    print("decomposes with multiplicity = dimension:",
          decompose(reg, table))


if __name__ == "__main__":
    main()
