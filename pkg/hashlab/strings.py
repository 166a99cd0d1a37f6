"""
String sets for the verifier, and the two input encodings of the CLI.

Strings are tuples of integer characters. Sets are listed in
length-then-lexicographic order, so the strings of length <= n always
form a prefix of the list.
"""
from dataclasses import dataclass
from functools import cached_property
import itertools

from hashlab.errors import CapacityError, DomainError, UsageError

RULES = ("all", "unary", "explicit")


@dataclass(frozen=True)
class StringSet:
    alphabet_size: int
    max_len: int
    rule: str = "all"
    min_len: int = 1
    exclude_trailing_zero: bool = False
    explicit: tuple = ()
    unary_char: int = 0

    def __post_init__(self):
        if self.rule not in RULES:
            raise DomainError(f"unknown string rule {self.rule!r}")
        if self.alphabet_size < 1:
            raise DomainError("alphabet size must be >= 1")
        if self.rule != "explicit" and not 0 <= self.min_len <= self.max_len:
            raise DomainError(f"need 0 <= min_len <= max_len, got {self.min_len}, {self.max_len}")
        if self.rule == "unary" and not 0 <= self.unary_char < self.alphabet_size:
            raise DomainError(f"unary character {self.unary_char} outside the alphabet")
        if self.rule == "explicit":
            members = tuple(tuple(s) for s in self.explicit)
            if len(set(members)) != len(members):
                raise DomainError("explicit string list contains duplicates")
            for s in members:
                if any(not 0 <= c < self.alphabet_size for c in s):
                    raise DomainError(f"string {format_string(s)} uses characters outside the alphabet")
                if len(s) > self.max_len:
                    raise DomainError(f"string {format_string(s)} is longer than max_len={self.max_len}")
            object.__setattr__(self, "explicit", members)

    @classmethod
    def for_family(cls, spec, max_len, min_len=1):
        """All strings of the family's alphabet; multilinear drops strings ending in 0."""
        return cls(
            alphabet_size=spec.alphabet_size,
            max_len=max_len,
            min_len=min_len,
            exclude_trailing_zero=(spec.construction == "multilinear"),
        )

    @classmethod
    def unary(cls, max_len, char=0, alphabet_size=None, min_len=1):
        return cls(
            alphabet_size=alphabet_size or char + 1,
            max_len=max_len,
            rule="unary",
            min_len=min_len,
            unary_char=char,
        )

    @classmethod
    def of(cls, strings, alphabet_size):
        strings = tuple(tuple(s) for s in strings)
        return cls(
            alphabet_size=alphabet_size,
            max_len=max((len(s) for s in strings), default=0),
            rule="explicit",
            min_len=0,
            explicit=strings,
        )

    def _keep(self, s):
        return not (self.exclude_trailing_zero and s and s[-1] == 0)

    def count(self):
        """Number of members, computed without listing them."""
        if self.rule == "explicit":
            return len(self.explicit)
        if self.rule == "unary":
            return self.max_len - self.min_len + 1
        sigma = self.alphabet_size
        total = 0
        for n in range(self.min_len, self.max_len + 1):
            level = sigma**n
            if self.exclude_trailing_zero and n > 0:
                level -= sigma ** (n - 1)
            total += level
        return total

    @cached_property
    def members(self):
        if self.rule == "explicit":
            return tuple(sorted(self.explicit, key=lambda s: (len(s), s)))
        if self.rule == "unary":
            return tuple((self.unary_char,) * n for n in range(self.min_len, self.max_len + 1))
        out = []
        for n in range(self.min_len, self.max_len + 1):
            out.extend(s for s in itertools.product(range(self.alphabet_size), repeat=n) if self._keep(s))
        return tuple(out)

    def strings(self, limit=None):
        if limit is not None and self.count() > limit:
            raise CapacityError(
                f"string set has {self.count()} members, over the limit of {limit}",
                count=self.count(),
                budget=limit,
            )
        return self.members

    def prefix_sizes(self):
        """prefix_sizes()[n] = number of members of length <= n."""
        sizes = [0] * (self.max_len + 1)
        for s in self.members:
            sizes[len(s)] += 1
        for n in range(1, self.max_len + 1):
            sizes[n] += sizes[n - 1]
        return sizes

    def __len__(self):
        return self.count()

    def describe(self):
        doc = {
            "rule": self.rule,
            "alphabet_size": self.alphabet_size,
            "min_len": self.min_len,
            "max_len": self.max_len,
            "count": self.count(),
        }
        if self.exclude_trailing_zero:
            doc["exclusion"] = "no-trailing-zero"
        if self.rule == "unary":
            doc["unary_char"] = self.unary_char
        if self.rule == "explicit":
            doc["strings"] = [list(s) for s in self.members]
        return doc


def parse_string(text, ints=False):
    """
    Decode a CLI string argument.

    Byte text: characters are UTF-8 byte values (sigma = 256).
    Integer form: comma-separated integers, e.g. "1,0,2"; empty text is the empty string.
    """
    if not ints:
        return tuple(text.encode("utf-8"))
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def format_string(s):
    """Integer-list rendering used in text and CSV output; the empty string is ''."""
    return ",".join(str(c) for c in s) if s else "''"
