"""Run the cross-module checks defined by validate_utils."""
import logging
from typing import Dict, List, Optional, Sequence, Tuple, Type

from scfdma.dft import override_normalization
from scfdma.utils.errors import ScfdmaError
from scfdma.validate_utils.check import DEFAULT_GEOMETRIES, Check, CheckResult
from scfdma.validate_utils.circularization import CpCircularizationCheck
from scfdma.validate_utils.equalizer_checks import SinrConsistencyCheck, ZfPropertyCheck
from scfdma.validate_utils.identities import NobleIdentityCheck, PathEquivalenceCheck
from scfdma.validate_utils.noise_checks import NoiseVarianceCheck

VALIDATION_CHECKS: Dict[str, Type[Check]] = {
    "noble-identities": NobleIdentityCheck,
    "path-equivalence": PathEquivalenceCheck,
    "cp-circularization": CpCircularizationCheck,
    "zf-property": ZfPropertyCheck,
    "sinr-consistency": SinrConsistencyCheck,
    "noise-variance": NoiseVarianceCheck,
}


def _run(check: Check) -> CheckResult:
    try:
        return check.run()
    except ScfdmaError as e:
        logging.warning(f"{check.name} raised: {e}")
        return CheckResult(
            name=check.name,
            passed=False,
            max_error=float("inf"),
            tolerance=check.tolerance,
            detail=str(e),
        )


def validate(
    geometries: Sequence[Tuple[int, int, int]] = DEFAULT_GEOMETRIES,
    checks: Optional[List[str]] = None,
    seed: int = 0,
    dft_norm: Optional[str] = None,
) -> List[CheckResult]:
    """Run each named check over the geometries.

    Args:
        geometries: (M, N, N_g) triples.
        checks: A list of check names; all when empty.
        seed: Master seed.
        dft_norm: Run under another transform scaling (fault injection).

    Returns:
        List of CheckResult, in registry order.
    """
    if not checks:
        checks = list(VALIDATION_CHECKS.keys())

    results = []
    for name in checks:
        if name in VALIDATION_CHECKS:
            logging.info(f"Running {name}")
            check = VALIDATION_CHECKS[name](geometries, seed)
            if dft_norm:
                with override_normalization(dft_norm):
                    results.append(_run(check))
            else:
                results.append(_run(check))
    return results
