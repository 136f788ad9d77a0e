n = int(input())
acc = 1
i = 1
while i <= n:
    acc *= i
    i += 1
print(acc)
