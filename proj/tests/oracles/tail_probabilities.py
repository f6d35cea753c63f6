# Regenerates the frozen tail-probability table in tests/test_stats.cpp.
# Independent of the C++ implementation: mpmath at 50 significant digits.
import mpmath as mp

mp.mp.dps = 50

chi_square = [(0.5, 1), (3.857142857142857, 1), (1.0, 2), (5.991464547107979, 2),
              (10.0, 6), (12.591587243743977, 6), (264.56, 6), (0.1, 10),
              (30.0, 20), (150.0, 120)]
f_dist = [(1.5, 1, 4), (0.5, 2, 10), (3.0, 3, 30), (69.63, 6, 693), (1.0, 6, 693),
          (2.1, 6, 693), (0.2, 5, 5), (4.0, 1, 1), (10.0, 10, 2), (1.2, 50, 60)]


def chi_sf(x, df):
    return mp.gammainc(mp.mpf(df) / 2, mp.mpf(x) / 2, mp.inf, regularized=True)


def f_sf(f, d1, d2):
    x = mp.mpf(d2) / (d2 + d1 * mp.mpf(f))
    return mp.betainc(mp.mpf(d2) / 2, mp.mpf(d1) / 2, 0, x, regularized=True)


for x, df in chi_square:
    print(f"    {{{x!r}, {df}, {mp.nstr(chi_sf(x, df), 20)}}},")
print()
for f, d1, d2 in f_dist:
    print(f"    {{{f!r}, {d1}, {d2}, {mp.nstr(f_sf(f, d1, d2), 20)}}},")
