"""Test functions as expressions, with exact first and second derivatives.

Expressions are parsed once into a tree; evaluation carries a second-order
dual number, so f, f' and f'' come out of a single pass.  Kinks from abs,
min and max are located and recorded so quadrature can split there.
"""

from logkantorovich import LogWeight, eval_jet, f_mu, parse, registry, validate
from logkantorovich.errors import ParseError, ValidationError
from logkantorovich.funcexpr import to_source

f = validate("x^2 + sin(3*x)", 1.0)
print("canonical form:", to_source(f.ast))
j = eval_jet(f, 0.5)
print(f"f(0.5) = {j.value:.12f}, f'(0.5) = {j.d1:.12f}, f''(0.5) = {j.d2:.12f}")

g = validate("x*lnmu(x)", 1.0)
print("d/dx x ln(2 + x) at 0.5:", eval_jet(g, 0.5).d1)
print("f_mu of it is x again:", f_mu(g, LogWeight(1.0))(0.3))

hat = registry(1.0)["hat"]
print("hat:", hat.source, "| smoothness", hat.smoothness.name, "| kinks", hat.kinks)

for bad in ("2x", "sin(x", "y + 1"):
    try:
        parse(bad)
    except ParseError as exc:
        print(f"{bad!r:10} -> {exc}")

try:
    validate("ln(x - 1)", 1.0)
except ValidationError as exc:
    print("'ln(x - 1)' ->", exc)
