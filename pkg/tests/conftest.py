import decimal

# test-side Decimal arithmetic (oracle comparisons with slack) must not
# round at the default 28 digits
decimal.getcontext().prec = 120
