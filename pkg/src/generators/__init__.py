from .generators import gen_hitting_set, gen_or_composition, gen_random_protrusion, gen_subset_sum

__all__ = [
    "gen_hitting_set",
    "gen_or_composition",
    "gen_random_protrusion",
    "gen_subset_sum",
]
