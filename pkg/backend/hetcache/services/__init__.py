"""
hetcache - Services

One module per concern:
- combinatorics: generalised binomials, bound kernels, user-set bitmasks
- system_model: configuration checks, demand classes, placement checker
- scheme2: split placement, XOR delivery, decoding and the achievable load
- optimizer: grid plus golden-section minimisation over the memory split
- converse: genie-aided bound, memory profiles and the counting arguments
- analysis: memory sweeps, gap computation, worst-case demand search
- verification: the simulation and counting suites behind ``verify``
"""
