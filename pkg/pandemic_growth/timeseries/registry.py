"""
Region registry and day calendar.

Regions are configuration: the registry fixes the 1..R numbering by sorting
on region name, so any R works (tests use R=3, the US dataset uses R=51).
"""

from dataclasses import dataclass
from datetime import date, timedelta
from typing import Dict, Iterable, Iterator, List, Tuple, Union

from ..core.errors import ConfigurationError, OutOfRange


@dataclass(frozen=True)
class RegionId:
    """A region with its 1-based index in the registry"""
    index: int
    code: str
    name: str


class RegionRegistry:
    """Bijective code <-> index mapping with alphabetical-by-name order"""

    def __init__(self, regions: Iterable[Tuple[str, str]]):
        entries = [(str(code).strip(), str(name).strip()) for code, name in regions]
        if not entries:
            raise ConfigurationError("Region registry is empty")

        codes = [code for code, _ in entries]
        if len(set(codes)) != len(codes):
            raise ConfigurationError("Region registry contains duplicate codes")

        ordered = sorted(entries, key=lambda entry: (entry[1], entry[0]))
        self._regions = [RegionId(index=i + 1, code=code, name=name) for i, (code, name) in enumerate(ordered)]
        self._by_code: Dict[str, RegionId] = {region.code: region for region in self._regions}

    def __len__(self) -> int:
        return len(self._regions)

    def __iter__(self) -> Iterator[RegionId]:
        return iter(self._regions)

    def __eq__(self, other) -> bool:
        return isinstance(other, RegionRegistry) and self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash(tuple(self.entries()))

    @property
    def codes(self) -> List[str]:
        return [region.code for region in self._regions]

    def entries(self) -> List[Tuple[str, str]]:
        return [(region.code, region.name) for region in self._regions]

    def get(self, key: Union[str, int, RegionId]) -> RegionId:
        """Resolve a code, a 1-based index or a RegionId"""
        if isinstance(key, RegionId):
            key = key.code
        if isinstance(key, str):
            if key not in self._by_code:
                raise OutOfRange(f"Unknown region code '{key}'")
            return self._by_code[key]
        index = int(key)
        if index < 1 or index > len(self._regions):
            raise OutOfRange(f"Region index {index} outside 1..{len(self._regions)}")
        return self._regions[index - 1]

    def contains(self, code: str) -> bool:
        return code in self._by_code

    def offset(self, key: Union[str, int, RegionId]) -> int:
        """0-based array offset of a region"""
        return self.get(key).index - 1


@dataclass(frozen=True)
class DayCalendar:
    """Affine map between day index k (k=1 at the epoch) and calendar dates"""
    epoch: date

    def to_date(self, k: int) -> date:
        return self.epoch + timedelta(days=int(k) - 1)

    def to_day(self, when: date) -> int:
        return (when - self.epoch).days + 1

    def parse(self, value: Union[str, date, int]) -> int:
        """Accept a day index, a date or an ISO date string"""
        if isinstance(value, int):
            return value
        if isinstance(value, date):
            return self.to_day(value)
        text = str(value).strip()
        if text.lstrip("-").isdigit():
            return int(text)
        return self.to_day(date.fromisoformat(text))
