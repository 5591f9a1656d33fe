"""
Annotator agreement with Cohen's kappa
======================================
"""

from fwsmine.evaluation import cohens_kappa

a = ["Method", "Method", "Resources", "Problem", "Method", "Other", "Evaluation", "Method"]
b = ["Method", "Application", "Resources", "Problem", "Method", "Method", "Evaluation", "Method"]

r = cohens_kappa(a, b)
print(f"observed {r.observed:.3f}  expected {r.expected:.3f}  kappa {r.kappa:.3f}")

# chance agreement can cancel observed agreement entirely
print(cohens_kappa([1, 1, 0, 0], [1, 0, 0, 1]).kappa)
