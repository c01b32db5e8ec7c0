run_params = dict(
    profile='tuning-machine',
    snippet_params=dict(
        token_limit=4096,
    ),
    fix_params=dict(
        tiers=('general', 'code_smell', 'specific'),
        max_in_flight=1,
    ),
    backend_params=dict(
        spec='scripted-mock',
        max_retries=3,
        backoff=1.0,
    ),
    miner_params=dict(
        terms=['by GitHub Copilot', 'use GitHub Copilot', 'with GitHub Copilot'],
        per_page=100,
        max_pages=10,
    ),
)

# smell counts over the 311 collected files, 46 of them smelly
published_distribution = dict(
    type_counts=dict(MNC=41, LPL=22, LM=14, LLF=12, LTCE=5, CCC=4, LMC=2, LC=2),
    files_scanned=311,
    files_smelly=46,
)
