"""Two-tier group hierarchy of the NBER patent classification.

Tier-1 codes are categories 1..6; tier-2 codes are two-digit subcategories
whose first digit is the enclosing category.
"""
from __future__ import annotations

from dataclasses import dataclass

CATEGORY_NAMES = {
    1: "Chemical",
    2: "Computers & Communications",
    3: "Drugs & Medical",
    4: "Electrical & Electronic",
    5: "Mechanical",
    6: "Others",
}

SUBCATEGORY_NAMES = {
    11: "Agriculture, Food, Textiles",
    12: "Coating",
    13: "Gas",
    14: "Organic Compounds",
    15: "Resins",
    19: "Miscellaneous-chemical",
    21: "Communications",
    22: "Computer HW & SW",
    23: "Computer Peripherals",
    24: "Information Storage",
    31: "Drugs",
    32: "Surgery & Med Inst.",
    33: "Biotechnology",
    39: "Miscellaneous-Drugs & Med",
    41: "Electrical Devices",
    42: "Electrical Lighting",
    43: "Measuring & Testing",
    44: "Nuclear & X-rays",
    45: "Power Systems",
    46: "Semiconductor Devices",
    49: "Miscellaneous-Elec",
    51: "Mat. Proc & Handling",
    52: "Metal Working",
    53: "Motors & Engines + Parts",
    54: "Optics",
    55: "Transportation",
    59: "Miscellaneous-Mechanical",
    61: "Agriculture, Husbandry, Food",
    62: "Amusement Devices",
    63: "Apparel & Textile",
    64: "Earth Working & Wells",
    65: "Furniture, House Fixtures",
    66: "Heating",
    67: "Pipes & Joints",
    68: "Receptacles",
    69: "Miscellaneous-Others",
}

# Node counts of the USPCN per subcategory (labeled patents only).
SUBCATEGORY_SIZES = {
    11: 18571, 12: 34443, 13: 12101, 14: 79947, 15: 77051, 19: 235240,
    21: 96119, 22: 67186, 23: 17419, 24: 38218,
    31: 52586, 32: 56503, 33: 17392, 39: 13043,
    41: 75841, 42: 36243, 43: 66093, 44: 34132, 45: 81754, 46: 39439, 49: 54494,
    51: 131787, 52: 70511, 53: 87574, 54: 50088, 55: 69593, 59: 121122,
    61: 50350, 62: 23237, 63: 41523, 64: 35976, 65: 48658, 66: 31959,
    67: 22216, 68: 51905, 69: 200035,
}

CATEGORY_SIZES = {
    1: 457353, 2: 218942, 3: 139524, 4: 387996, 5: 530675, 6: 505859,
}

CATEGORIES = tuple(sorted(CATEGORY_NAMES))
SUBCATEGORIES = tuple(sorted(SUBCATEGORY_NAMES))


@dataclass(frozen=True, order=True)
class GroupLabel:
    tier1: int
    tier2: int

    def __post_init__(self):
        if not 1 <= self.tier1 <= 9:
            raise ValueError(f"category code must be in 1..9, got {self.tier1}")
        if self.tier2 // 10 != self.tier1:
            raise ValueError(
                f"subcategory {self.tier2} does not belong to category {self.tier1}")

    @classmethod
    def from_subcategory(cls, tier2: int) -> "GroupLabel":
        return cls(tier2 // 10, tier2)

    def at(self, tier: int) -> int:
        if tier == 1:
            return self.tier1
        if tier == 2:
            return self.tier2
        raise ValueError(f"tier must be 1 or 2, got {tier!r}")


def is_known_subcategory(code) -> bool:
    return code in SUBCATEGORY_NAMES


def group_tier(code: int, codes: tuple[int, ...] | None = None) -> int:
    """Tier of a group code: single-digit codes are categories, two-digit
    codes are subcategories. ``codes`` optionally restricts the valid set."""
    code = int(code)
    if 1 <= code <= 9:
        tier = 1
    elif 10 <= code <= 99:
        tier = 2
    else:
        raise KeyError(f"unknown group code {code}")
    if codes is not None and code not in codes:
        raise KeyError(f"unknown group code {code}")
    return tier


def subcategories_of(category: int) -> tuple[int, ...]:
    return tuple(s for s in SUBCATEGORIES if s // 10 == category)
