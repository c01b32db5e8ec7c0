normalize = lambda text, width: text.strip().ljust(width) + '|' + text.upper()
