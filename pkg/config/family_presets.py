"""
Per-construction defaults and the reference corpus.
Static tables only; config/lab_config.py holds the environment driven settings.
"""

CONSTRUCTIONS = (
    "constant",
    "multilinear",
    "zobrist",
    "cwpoly",
    "cwpoly-strong",
    "tabulated",
    "shift-tabulated",
    "pearson",
    "generalized-pearson",
    "division",
    "bernstein",
    "fnv1",
    "fnv1a",
    "sax",
    "sxx",
    "gcc-cpp",
    "java-string",
    "power-of-two",
)

INIT_POLICIES = ("fixed-zero", "fixed-one", "uniform-random")

# Short names accepted by the family spec grammar (init=zero|one|random)
INIT_ALIASES = {
    "zero": "fixed-zero",
    "one": "fixed-one",
    "random": "uniform-random",
    "fixed-zero": "fixed-zero",
    "fixed-one": "fixed-one",
    "uniform-random": "uniform-random",
}

# Default initial value policy per construction
DEFAULT_INIT = {
    "constant": "uniform-random",
    "multilinear": "uniform-random",  # H_0 is the constant coefficient m_1
    "zobrist": "fixed-zero",
    "cwpoly": "fixed-one",
    "cwpoly-strong": "fixed-zero",  # not iterated; H_0 unused
    "tabulated": "uniform-random",
    "shift-tabulated": "uniform-random",
    "pearson": "uniform-random",
    "generalized-pearson": "uniform-random",
    "division": "fixed-one",
    "bernstein": "uniform-random",
    "fnv1": "uniform-random",
    "fnv1a": "uniform-random",
    "sax": "uniform-random",
    "sxx": "uniform-random",
    "gcc-cpp": "fixed-zero",
    "java-string": "fixed-zero",
    "power-of-two": "uniform-random",
}

# Constructions whose word size is fixed by the reference implementation
FIXED_WORD_BITS = {
    "gcc-cpp": 32,
    "java-string": 32,
}

# Constructions that take a byte alphabet unless told otherwise
BYTE_ALPHABET = ("gcc-cpp", "java-string")

# Generalized iterated constructions need a length capacity
DEFAULT_MAX_LEN = 2

# Shift amounts as measured at L = 32; scaled down for smaller words
REFERENCE_SHIFT_BITS = 32
DEFAULT_SHIFTS = {
    "bernstein": (5, None),
    "sax": (5, 2),
    "sxx": (5, 2),
}

# FNV multipliers at the standard word sizes
FNV_PRIMES = {
    32: 16777619,
    64: 1099511628211,
}

# FNV offset bases, used by the bench corpus only
FNV_OFFSET_BASIS = {
    32: 2166136261,
    64: 14695981039346656037,
}

# Reference corpus: 20 strings for hasher regression tests and bench
REFERENCE_CORPUS = (
    "",
    "a",
    "z",
    "ab",
    "ba",
    "abc",
    "hash",
    "Aa",
    "BB",
    "hello world",
    "The quick brown fox",
    "jumps over the lazy dog",
    "0123456789",
    "polygenelubricants",
    "iterated hashing",
    "zzzzzzzzzzzzzzzz",
    "collision",
    "universal",
    "Pearson",
    "tabulation",
)

# Families timed by `bench` at each word size
BENCH_FAMILIES = (
    "bernstein",
    "fnv1",
    "fnv1a",
    "sax",
    "sxx",
    "power-of-two",
    "shift-tabulated",
    "cwpoly",
    "gcc-cpp",
    "java-string",
)
BENCH_WORD_BITS = (32, 64)


def get_default_init(construction):
    return DEFAULT_INIT.get(construction, "uniform-random")
