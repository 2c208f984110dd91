"""JSON schemas for the payload of each CLI subcommand."""

_num = {"type": "number"}
_int = {"type": "integer"}
_bool = {"type": "boolean"}
_sets = {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 1}}}
_pair = {
    "type": "object",
    "required": ["n", "a", "b"],
    "properties": {"n": _int, "a": _sets, "b": _sets},
}

VERIFY = {
    "type": "object",
    "required": ["kind", "n", "size_a", "size_b"],
    "properties": {
        "kind": {"enum": ["recovering", "cancellative", "left-cancellative", "right-cancellative", "uniform"]},
        "n": _int,
        "size_a": _int,
        "size_b": _int,
        "recovering": _bool,
        "cancellative": _bool,
        "left-cancellative": _bool,
        "right-cancellative": _bool,
        "uniform": {"type": ["integer", "null"]},
    },
}

CONDITIONS = {
    "type": "object",
    "required": ["theta", "alpha", "mu_can", "mu", "all_hold"],
    "properties": {
        "theta": _num,
        "alpha": _num,
        "mu_can": _num,
        "mu": _num,
        "theta_below_mu_can": _bool,
        "alpha_at_most_half": _bool,
        "inverse_gap": {"type": ["number", "null"]},
        "inverse_gap_ok": _bool,
        "geometric_mean": _num,
        "geometric_mean_ok": _bool,
        "all_hold": _bool,
    },
}

BOUNDS = {
    "type": "object",
    "required": ["rate", "conditions"],
    "properties": {
        "rate": _num,
        "conditions": CONDITIONS,
        "pair": {
            "type": "object",
            "required": ["k", "log2_a", "log2_ab", "rhs_f", "rhs_g", "filtered"],
            "properties": {
                "k": _int,
                "log2_a": _num,
                "log2_ab": _num,
                "rhs_f": _num,
                "rhs_g": _num,
                "filtered": {
                    "type": "object",
                    "required": ["holds", "threshold", "worst_ratio"],
                    "properties": {"holds": _bool, "threshold": _num, "worst_ratio": _num},
                },
                "one_sided_ok": _bool,
                "symmetric_ok": _bool,
            },
        },
    },
}

CERTIFICATE = {
    "type": "object",
    "required": [
        "func", "params", "k", "lipschitz", "threshold", "grid_max", "argmax",
        "margin", "certified_bound", "pass", "evaluations", "wall_ms",
    ],
    "properties": {
        "func": {"type": "string"},
        "params": {"type": "object", "additionalProperties": _num},
        "k": {"type": "integer", "minimum": 1},
        "lipschitz": _num,
        "threshold": _num,
        "grid_max": _num,
        "argmax": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
        "margin": _num,
        "certified_bound": _num,
        "pass": _bool,
        "evaluations": _int,
        "wall_ms": _num,
    },
}

TOLHUIZEN = {
    "type": "object",
    "required": ["n", "k", "trials", "best_info_sets", "fraction", "product", "log3_ratio"],
    "properties": {
        "n": _int,
        "k": _int,
        "trials": _int,
        "seed": _int,
        "best_info_sets": _int,
        "fraction": _num,
        "mean_fraction": _num,
        "expected_fraction": _num,
        "product": _int,
        "log3_ratio": _num,
        "left_cancellative": _bool,
        "upper_check_ok": _bool,
    },
}

SEARCH = {
    "type": "object",
    "required": ["n", "kind", "best_product", "witness", "exhaustive", "nodes_explored"],
    "properties": {
        "n": _int,
        "kind": {"enum": ["recovering", "cancellative", "left-cancellative"]},
        "best_product": _int,
        "witness": _pair,
        "exhaustive": _bool,
        "nodes_explored": _int,
        "k_uniform": {"type": ["integer", "null"]},
        "witness_ok": _bool,
    },
}

CONSTANTS = {
    "type": "object",
    "required": ["theta", "alpha", "claim_rate", "headline_rate", "mu_can_lower",
                 "mu_can_upper_janzer", "mu_rec_upper_nair_yazdanpanah", "info_set_density"],
    "additionalProperties": True,
}

BY_COMMAND = {
    "verify": VERIFY,
    "bounds": BOUNDS,
    "certify": CERTIFICATE,
    "tolhuizen": TOLHUIZEN,
    "search": SEARCH,
    "constants": CONSTANTS,
}
