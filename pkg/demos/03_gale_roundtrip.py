"""
From a Gale diagram to a polytope and back
==========================================

A subset of points spans a face exactly when the origin lies in the hull of
the complementary diagram vectors. Here we realize a random diagram as an
honest point set and check the criterion against a brute-force hull.
"""

from itertools import combinations

from galelab import Dims, SamplerConfig, hull_faces, is_face, realize, sample_gale_diagram

d, N = 3, 7
diagram = sample_gale_diagram(SamplerConfig(Dims(d, N, 0), seed=3))
points = realize(diagram)

print("realized points (exact rationals, shown as floats):")
for p in points.points:
    print("  ", [round(float(x), 4) for x in p])

for k in range(d):
    predicted = {frozenset(I) for I in combinations(range(N), k + 1) if is_face(diagram, I)}
    observed = hull_faces(points, k).faces
    print(f"k={k}: {len(predicted)} faces by the diagram, {len(observed)} by the hull,"
          f" agree={predicted == observed}")
