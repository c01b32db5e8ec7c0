def decode(loader, blob):
    try:
        return loader.read(blob)
    except loader.errors.io.codec.DecodeError:
        return None
