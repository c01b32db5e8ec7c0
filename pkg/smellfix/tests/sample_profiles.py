import pathlib

from smellfix.profiles import TUNING_MACHINE, ThresholdProfile

FIXTURES = pathlib.Path(__file__).parent / 'fixtures'
GOLDEN = FIXTURES / 'golden'
CORPUS = FIXTURES / 'corpus'
BROKEN = FIXTURES / 'broken'
REGIONS = FIXTURES / 'regions'

fixture_thresholds = dict(
    PAR=4,
    MLOC=10,
    DOC_CHAIN=2,
    CLOC=15,
    LMC_LEN=3,
    NBC=2,
    LLF_LEN=40,
    LTCE_LEN=40,
    CNC=2,
    DOC=2,
)

# instances per fixture file under fixture_thresholds
expected_counts = {
    'lpl_01.py': dict(LPL=1),
    'lpl_02.py': dict(LPL=2),
    'lpl_03.py': dict(LPL=2),
    'lm_01.py': dict(LM=1),
    'lm_02.py': dict(LM=2),
    'lm_03.py': dict(LM=1),
    'lsc_01.py': dict(LSC=1),
    'lsc_02.py': dict(LSC=2),
    'lsc_03.py': dict(LSC=2),
    'lc_01.py': dict(LC=1),
    'lc_02.py': dict(LC=2),
    'lc_03.py': dict(LC=1),
    'lmc_01.py': dict(LMC=1),
    'lmc_02.py': dict(LMC=2),
    'lmc_03.py': dict(LMC=3),
    'lbcl_01.py': dict(LBCL=1),
    'lbcl_02.py': dict(LBCL=2),
    'lbcl_03.py': dict(LBCL=2),
    'llf_01.py': dict(LLF=1),
    'llf_02.py': dict(LLF=2),
    'llf_03.py': dict(LLF=2),
    'ltce_01.py': dict(LTCE=1),
    'ltce_02.py': dict(LTCE=2),
    'ltce_03.py': dict(LTCE=2),
    'ccc_01.py': dict(CCC=1),
    'ccc_02.py': dict(CCC=2),
    'ccc_03.py': dict(CCC=2),
    'mnc_01.py': dict(MNC=1),
    'mnc_02.py': dict(MNC=3),
    'mnc_03.py': dict(MNC=3),
    'clean_01.py': dict(),
    'clean_02.py': dict(),
    'clean_03.py': dict(),
    'clean_04.py': dict(),
    'clean_05.py': dict(),
}

# one smell per file under fixture_thresholds, and the snippet lines it widens to
expected_regions = {
    'elif_chain.py': ('LMC', (2, 5)),
    'else_inline.py': ('LMC', (2, 4)),
    'except_clause.py': ('LMC', (2, 5)),
    'decorator_chain.py': ('LMC', (4, 6)),
    'multiline_header.py': ('LMC', (2, 4)),
    'column0_string.py': ('LMC', (2, 4)),
    'method_lpl.py': ('LPL', (5, 6)),
}


def fixture_profile(**options):
    return ThresholdProfile(name='fixture',
                            thresholds=dict(fixture_thresholds),
                            provenance='unit-test fixture values',
                            **options)


config_params = dict(
    profile=TUNING_MACHINE,
    profile_params=dict(
        thresholds=fixture_thresholds,
    ),
    snippet_params=dict(
        token_limit=4096,
    ),
    fix_params=dict(
        max_in_flight=1,
    ),
    backend_params=dict(
        spec='scripted-mock:fix',
        backoff=0.0,
    ),
    miner_params=dict(
        per_page=2,
        max_pages=3,
        backoff=0.0,
    ),
)
