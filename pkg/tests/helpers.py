import os
from fractions import Fraction

from twisted_vw import qseries

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "configs")


def load_yaml(path):
    import yaml
    if not os.path.isabs(path) and not os.path.exists(path):
        path = os.path.join(CONFIG_DIR, path)
    with open(path, "r") as f:
        return yaml.safe_load(f)


def rat(raw):
    """YAML gives ints for whole numbers and strings for num/den."""
    return Fraction(raw) if not isinstance(raw, str) else Fraction(raw.strip())


def coefficients(series):
    """{exponent: rational coefficient} of a series with rational coefficients."""
    return dict(qseries.rational_terms(series))
