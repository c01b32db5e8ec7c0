def first_label(response):
    return response.json()['data'][0].attributes.labels.primary.value


SEPARATOR = ', '.join(['a', 'b']).strip().lower().title().swapcase()


def reset(state):
    state.cache.entries.store.size = 0
