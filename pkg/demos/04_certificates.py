"""
Distance certificates
=====================

A checked derivation that two diagrams are at most eps apart.  The
synthesiser produces one from the computed distance; the checker
replays it against the diagrams and reports the bound it actually
establishes.  Tampering with any bound inside gets the whole thing
rejected.
"""

from fractions import Fraction

from chartdist import (
    CCoupling, CWeaken, CertificateError, SynthesisFailure, check,
    format_cert, from_expression, parse_cert, synthesize,
)

f = from_expression("a.a.0", 0)
g = from_expression("a.0", 0)

# synthesise at the exact distance
cert = synthesize(f, g)
print("certificate for a.a.0 vs a.0:")
print(" ", format_cert(cert))
print("checker confirms eps =", check(cert, f, g))
print()

# a looser bound is also certifiable; the weakening step is explicit
loose = synthesize(f, g, eps=Fraction(3, 4))
print("weakened to 3/4:", format_cert(loose))
assert isinstance(loose, CWeaken)
print("checker confirms eps =", check(loose, f, g))
print()

# certificates survive a round trip through text
again = parse_cert(format_cert(cert))
print("re-parsed check:", check(again, f, g))
print()

# asking for a bound below the true distance fails, and the failure
# carries the distance so callers learn the real answer
try:
    synthesize(f, g, eps=Fraction(1, 4))
except SynthesisFailure as exc:
    print("eps=1/4 refused; true distance is", exc.distance)
print()

# lower a bound by hand and the checker notices
assert isinstance(cert, CCoupling)
doctored = format_cert(cert).replace("1/2", "1/4", 1)
print("doctored text:", doctored)
try:
    check(parse_cert(doctored), f, g)
except CertificateError as exc:
    print("rejected:", exc)
