def summarize(values):
    """Return simple statistics."""
    count = 0
    total = 0

    # walk the values once
    for value in values:
        count += 1
        total += value

    mean = total / count if count else 0
    return count, total, mean
