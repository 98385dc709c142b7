"""
Intersections of translates of a finite set
===========================================

For a finite A and l distinct translations, the common part of the
translates has at most #A + 1 - l points. We check one case by hand,
then run the exhaustive oracle over a small grid.
"""

from fractalsum import exhaustive_translate_oracle, translate_intersection

report = translate_intersection([0, 1, 2], [0, 1, 2])
print("intersection:", report.intersection, "bound:", report.bound)

# Every A in {0..5} with 2 to 5 elements, every admissible set of translations
# taken from (A - A) and (A - A) + 1/2.
verdict = exhaustive_translate_oracle(5, 1, 5)
print(f"{verdict.sets_checked} sets, {verdict.cases_checked} cases, "
      f"{verdict.tight_cases} tight, {len(verdict.violations)} violations")
