"""The bump integral and the singular integral kappa by both quadratures."""

from lagrange4.oscillatory import bump_integral, kappa_oscillatory, kappa_surface


def main():
    print(f"integral of omega_0          {bump_integral():.13e}")
    print(f"normalized (e^16 omega_0)    {bump_integral(normalized=True):.14f}")
    a, b = kappa_oscillatory(), kappa_surface()
    for k in (a, b):
        print(f"kappa [{k.method:>11}]  {k.value:.12e}  normalized {k.normalized:.12e}  err {k.error_estimate:.1e}")
    print(f"relative gap                 {abs(a.value - b.value) / b.value:.2e}")


if __name__ == "__main__":
    main()
