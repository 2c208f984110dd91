"""Named constants of the sandglass bounds."""

import math

THETA = 2.222
ALPHA = 0.27
CLAIM_RATE = 2.2499  # floor in the recursion, g* must stay below log2 of this
HEADLINE_RATE = 2.2543
MU_CAN_LOWER = 2.25
MU_CAN_JANZER = 2.2682
MU_REC_NAIR_YAZDANPANAH = 2.2663

H_STAR_LOW = 0.01
H_STAR_HIGH = 0.99

APPENDIX_K = 30000
APPENDIX_LIPSCHITZ = 25.0
APPENDIX_GRID_MAX = 1.1687
APPENDIX_CERTIFIED = 1.1696
APPENDIX_LOG2_FLOOR = 1.1698


def _infinite_product(terms: int = 80) -> float:
    out = 1.0
    for i in range(1, terms + 1):
        out *= 1.0 - 2.0 ** -i
    return out


INFO_SET_DENSITY = _infinite_product()  # prod_{i>=1} (1 - 2^-i)


def as_dict() -> dict:
    return {
        "theta": THETA,
        "alpha": ALPHA,
        "claim_rate": CLAIM_RATE,
        "log2_claim_rate": math.log2(CLAIM_RATE),
        "headline_rate": HEADLINE_RATE,
        "mu_can_lower": MU_CAN_LOWER,
        "mu_can_upper_janzer": MU_CAN_JANZER,
        "mu_rec_upper_nair_yazdanpanah": MU_REC_NAIR_YAZDANPANAH,
        "info_set_density": INFO_SET_DENSITY,
        "h_star_cutoffs": [H_STAR_LOW, H_STAR_HIGH],
        "appendix_k": APPENDIX_K,
        "appendix_lipschitz": APPENDIX_LIPSCHITZ,
    }
