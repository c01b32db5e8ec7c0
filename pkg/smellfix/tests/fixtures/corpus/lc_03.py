class Ledger:
    """Double entry ledger.

    Every posting moves an amount from one account to another. The
    ledger keeps postings in insertion order and never rewrites them.

    Balances are derived on demand.
    """

    def __init__(self):
        self.postings = []

    def post(self, source, target, amount):
        self.postings.append((source, target, amount))

    def balance(self, account):
        total = 0
        for source, target, amount in self.postings:
            if target == account:
                total += amount
            if source == account:
                total -= amount
        return total
