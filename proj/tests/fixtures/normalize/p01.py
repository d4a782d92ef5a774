import sys
sys.setrecursionlimit(10**6)
def fib(k, memo={}):
    if k < 2:
        return k
    if k not in memo:
        memo[k] = fib(k - 1) + fib(k - 2)
    return memo[k]
print(fib(int(input())))
