def describe(temperature):
    return 'freezing cold outside' if temperature < 0 else 'fine weather today'
