class Config:
    # numerical defaults, overridable per run from the command line
    TOLERANCE = 1e-12
    MAX_ITER = 10**6
    JOBS = 1
    OUTPUT_FORMAT = "json"

    # sweeps above this arc count need --long-running
    LONG_RUNNING = False
    LONG_RUNNING_ARCS = 40

    BRUTE_FORCE_BUDGET = 10**7
    TIE_TOLERANCE = 1e-9
