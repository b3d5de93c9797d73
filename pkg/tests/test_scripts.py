import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parents[1] / "scripts"


@pytest.mark.parametrize("argv", [
    ["counterexample_divergence.py", "--n-max", "100"],
    ["identity_path_extension.py", "--M", "3", "--level", "6", "--denominator", "2"],
    ["decay_bound_comparison.py", "--max-size", "3", "--gammas", "0.75,0.95"],
])
def test_script_runs(argv):
    out = subprocess.run([sys.executable, str(SCRIPTS / argv[0]), *argv[1:]],
                         capture_output=True, text=True, timeout=120)
    assert out.returncode == 0, out.stderr
    assert out.stdout
