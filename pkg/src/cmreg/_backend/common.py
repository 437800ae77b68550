"""Constants shared by the kernel backends and the term layout."""

# Component index lives in the low bits of every packed term key.
COMP_BITS = 14
COMP_MASK = (1 << COMP_BITS) - 1
