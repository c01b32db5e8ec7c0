class Config:
    class Defaults:
        retries = 3
        timeout = 10

    name = 'service'
    host = 'localhost'
    port = 8080
    debug = False
    workers = 4
    queue = 'default'
    region = 'eu-west-1'
    bucket = 'artifacts'
    prefix = 'builds'
    suffix = '.tar.gz'
    owner = 'ci'


def register(cls):
    return cls


@register
class Settings:
    host = 'localhost'
    port = 5432
    user = 'admin'
    password = ''
    database = 'main'
    schema = 'public'
    pool_size = 5
    pool_timeout = 30
    echo = False
    sslmode = 'prefer'
    application = 'smelly'
    retries = 3
    backoff = 2
    timezone = 'UTC'
