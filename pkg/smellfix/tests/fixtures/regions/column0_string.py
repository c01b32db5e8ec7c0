def banner(settings, title):
    text = settings.display.theme.banner.format("""
{title}
""", title=title)
    return text
